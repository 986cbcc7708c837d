"""
Unit tests for the Levi-Civita lift
"""

import unittest
import sys

import numpy as np

sys.path.append("src")
from orbit_krein.errors import OriginError, EvenWinding, BranchJump
from orbit_krein.systems import OMEGA, hill_system
from orbit_krein.flow import Trajectory
from orbit_krein.helper_functions import winding_number
from orbit_krein.shooting import Orbit, SymmetryCertificate, shoot_doubly_symmetric
from orbit_krein.levi_civita import (
    LCPoint,
    lc_forward,
    lc_forward_array,
    lc_lift_point,
    lc_involution_check,
    lc_lift_orbit,
    sigma1,
    sigma2,
)


def _complex_block(value):
    # real matrix of multiplication by a complex number
    return np.array([[value.real, -value.imag], [value.imag, value.real]])


def _conjugate_block(value):
    # real matrix of dz_bar -> value * dz_bar
    return np.array([[value.real, value.imag], [value.imag, -value.real]])


def _jacobian(u):
    # exact Jacobian of (z, w) -> (z^2, w / (2 conj z)) in real coordinates
    jac = np.zeros((4, 4))
    jac[:2, :2] = _complex_block(2.0 * u.z)
    jac[2:, :2] = _conjugate_block(-u.w / (2.0 * np.conj(u.z) ** 2))
    jac[2:, 2:] = _complex_block(1.0 / (2.0 * np.conj(u.z)))
    return jac


def _random_lc_points(rng, count):
    z = rng.uniform(0.3, 2.0, count) * np.exp(1j * rng.uniform(-np.pi, np.pi, count))
    w = rng.normal(size=count) + 1j * rng.normal(size=count)
    return [LCPoint(complex(a), complex(b)) for a, b in zip(z, w)]


def _synthetic_orbit(q, p, period=1.0):
    states = np.column_stack((q.real, q.imag, p.real, p.imag))
    trajectory = Trajectory("synthetic", np.linspace(0.0, period, len(states)), states)
    return Orbit("synthetic", "synthetic", states[0], period, 0.0, SymmetryCertificate(1), trajectory)


class TestLCMap(unittest.TestCase):

    def setUp(self):
        self.rng = np.random.default_rng(3)

    def test_forward_examples(self):
        np.testing.assert_array_equal(lc_forward(LCPoint(1.0, 2.0)), [1.0, 0.0, 1.0, 0.0])
        np.testing.assert_allclose(lc_forward(LCPoint(1j, 0.0)), [-1.0, 0.0, 0.0, 0.0], atol=1e-16)

    def test_forward_origin(self):
        with self.assertRaises(OriginError):
            lc_forward(LCPoint(0.0, 1.0))

    def test_lift_examples(self):
        self.assertEqual(lc_lift_point([1.0, 0.0, 1.0, 0.0], "+"), LCPoint(1.0, 2.0))
        self.assertEqual(lc_lift_point([1.0, 0.0, 1.0, 0.0], "-"), LCPoint(-1.0, -2.0))

    def test_lift_origin(self):
        with self.assertRaises(OriginError):
            lc_lift_point([0.0, 0.0, 1.0, 0.0])

    def test_inverse_pair(self):
        for state in self.rng.normal(size=(100, 4)):
            for branch in (1, -1):
                np.testing.assert_allclose(lc_forward(lc_lift_point(state, branch)), state, rtol=1e-12, atol=1e-12)

    def test_symplectic(self):
        for u in _random_lc_points(self.rng, 50):
            jac = _jacobian(u)
            np.testing.assert_allclose(jac.T @ OMEGA @ jac, OMEGA, atol=1e-10)

    def test_finite_difference_jacobian(self):
        h = 1e-6
        for u in _random_lc_points(self.rng, 10):
            y = np.array([u.z.real, u.z.imag, u.w.real, u.w.imag])
            columns = []
            for i in range(4):
                e = np.zeros(4)
                e[i] = h
                columns.append((lc_forward_array(y + e) - lc_forward_array(y - e)) / (2.0 * h))
            np.testing.assert_allclose(np.array(columns).T, _jacobian(u), rtol=1e-6, atol=1e-6)


class TestInvolutions(unittest.TestCase):

    def test_random_samples(self):
        samples = _random_lc_points(np.random.default_rng(5), 1000)
        check = lc_involution_check(samples, 1e-13)
        self.assertTrue(check.passed)
        self.assertLessEqual(max(check.sigma1, check.sigma2), 1e-13)
        self.assertEqual(check.commute, 0.0)

    def test_single_sample(self):
        check = lc_involution_check([LCPoint(1.0, 0.0)])
        self.assertEqual((check.sigma1, check.sigma2, check.commute), (0.0, 0.0, 0.0))
        self.assertTrue(check.to_dict()["passed"])

    def test_composition(self):
        u = LCPoint(0.3 + 0.4j, -1.0 + 2.0j)
        self.assertEqual(sigma1(sigma2(u)), -u)
        self.assertEqual(sigma1(sigma1(u)), u)


class TestWindingNumber(unittest.TestCase):

    def test_against_oversampled_unwrapping(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            k = int(rng.integers(-3, 4))
            radius = rng.uniform(0.2, 0.8)

            def curve(s):
                return np.exp(2j * np.pi * k * s) + radius * np.exp(6j * np.pi * s)

            coarse = curve(np.linspace(0.0, 1.0, 201))
            dense = curve(np.linspace(0.0, 1.0, 2001))
            # summed principal angle increments on the oversampled curve
            increments = np.angle(dense[1:] / dense[:-1])
            expected = int(round(np.sum(increments) / (2.0 * np.pi)))
            self.assertEqual(expected, k)
            self.assertEqual(winding_number(np.column_stack((coarse.real, coarse.imag))), expected)

    def test_origin(self):
        with self.assertRaises(ValueError):
            winding_number(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 0.0]]))


class TestSyntheticLifts(unittest.TestCase):

    def test_even_winding(self):
        t = np.linspace(0.0, 1.0, 129)
        q = np.exp(4j * np.pi * t)
        with self.assertRaises(EvenWinding) as context:
            lc_lift_orbit(_synthetic_orbit(q, 1j * q))
        self.assertEqual(context.exception.winding, 2)

    def test_origin(self):
        t = np.linspace(0.0, 1.0, 129)
        q = np.exp(2j * np.pi * t) - 1.0
        with self.assertRaises(OriginError):
            lc_lift_orbit(_synthetic_orbit(q, np.zeros_like(q)))

    def test_branch_jump(self):
        angles = np.array([0.0, 0.8 * np.pi, -0.8 * np.pi, 0.0])
        q = np.exp(1j * angles)
        with self.assertRaises(BranchJump):
            lc_lift_orbit(_synthetic_orbit(q, np.zeros_like(q)))

    def test_circle(self):
        t = np.linspace(0.0, 1.0, 129)
        q = np.exp(2j * np.pi * t)
        curve = lc_lift_orbit(_synthetic_orbit(q, 1j * q))
        self.assertEqual(curve.winding, 1)
        self.assertEqual(len(curve.z), 257)
        self.assertAlmostEqual(curve.times[-1], 2.0, places=14)
        np.testing.assert_allclose(curve.z, np.exp(1j * np.pi * np.linspace(0.0, 2.0, 257)), atol=1e-12)


class TestHillLift(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.orbit = shoot_doubly_symmetric(hill_system(), -2.5, (0.05, 0.6), "retro").orbit
        cls.curve = lc_lift_orbit(cls.orbit, "+")

    def test_closes_once(self):
        self.assertEqual(abs(self.curve.winding), 1)
        n = len(self.orbit.trajectory.states) - 1
        self.assertEqual(len(self.curve.z), 2 * n + 1)
        self.assertAlmostEqual(self.curve.z[n], -self.curve.z[0], delta=1e-12)
        self.assertLessEqual(self.curve.residuals["closure"], 1e-12)

    def test_symmetry_residuals(self):
        for key in ("sigma1", "sigma2", "dsym"):
            self.assertLessEqual(self.curve.residuals[key], 1e-8, key)

    def test_start_on_fixed_set(self):
        u0 = self.curve.point(0)
        self.assertLessEqual(sigma1(u0).distance(u0), 1e-12)

    def test_projects_to_base(self):
        states = self.orbit.trajectory.states
        for k in (0, 37, 200):
            np.testing.assert_allclose(lc_forward(self.curve.point(k)), states[k], atol=1e-12)
            np.testing.assert_allclose(lc_forward(self.curve.point(k + 256)), states[k], atol=1e-12)

    def test_branch_consistency(self):
        other = lc_lift_orbit(self.orbit, "-")
        np.testing.assert_array_equal(other.z, -self.curve.z)
        np.testing.assert_array_equal(other.w, -self.curve.w)

    def test_export(self):
        data = self.curve.to_dict()
        self.assertEqual(data["coordinates"], "lc")
        self.assertEqual(data["columns"], ["t", "z_re", "z_im", "w_re", "w_im"])
        self.assertEqual(len(data["rows"]), len(self.curve.z))


if __name__ == "__main__":
    unittest.main()

"""
Unit tests for perpendicular shooting, quarter shifts and continuation
"""

import unittest
import sys

import numpy as np

sys.path.append("src")
from orbit_krein.errors import NoSignChange, SymmetryViolated
from orbit_krein.systems import hill_system, langmuir_system
from orbit_krein.flow import flow_map
from orbit_krein.real_sl2 import OrbitClass, RealSL2, couple_from_A, rotation
from orbit_krein.monodromy import report_from_couple, symmetric_orbit_report
from orbit_krein.shooting import (
    Orbit,
    ShootingOptions,
    shoot_doubly_symmetric,
    shoot_symmetric,
    quarter_shift,
    continue_family,
    family_transitions,
)


HILL_ENERGY = -2.5
HILL_BRACKET = (0.05, 0.6)


class TestHillDoublySymmetric(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.hill = hill_system()
        cls.result = shoot_doubly_symmetric(cls.hill, HILL_ENERGY, HILL_BRACKET, "retro")
        cls.orbit = cls.result.orbit
        cls.report = symmetric_orbit_report(cls.hill, cls.orbit)

    def test_certificate(self):
        certificate = self.orbit.certificate
        self.assertEqual(certificate.kind, "doubly_symmetric")
        self.assertEqual((certificate.inv_index, certificate.second_index), (1, 2))
        self.assertLessEqual(certificate.max_residual, 1e-7)
        self.assertLessEqual(certificate.residuals["dsym"], 1e-8)
        self.assertLessEqual(certificate.residuals["reversal_2"], 1e-9)
        self.assertLessEqual(certificate.residuals["reversal"], 1e-9)
        self.assertLessEqual(self.orbit.closure, 1e-8)
        self.assertLessEqual(self.result.residual, 1e-8)

    def test_start_point(self):
        x0 = self.orbit.initial_state
        self.assertTrue(self.hill.involution(1).is_fixed(x0))
        self.assertAlmostEqual(self.hill.H(x0), HILL_ENERGY, delta=1e-12)
        self.assertTrue(HILL_BRACKET[0] <= self.result.parameter <= HILL_BRACKET[1])
        self.assertEqual(x0[0], self.result.parameter)
        # retrograde start
        self.assertLess(x0[3] - x0[0], 0.0)

    def test_period(self):
        self.assertAlmostEqual(self.orbit.period, 4.0 * self.result.event_time, places=12)
        self.assertGreater(self.orbit.period, 0.0)

    def test_samples(self):
        states = self.orbit.trajectory.states
        n = len(states) - 1
        self.assertEqual(len(states), 257)
        np.testing.assert_array_equal(states[0], states[-1])
        rho1, rho2 = self.hill.involutions
        np.testing.assert_allclose(rho1(states[::-1]), states, atol=1e-8)
        half = n // 2
        np.testing.assert_allclose(rho2(states[half::-1]), states[: half + 1], atol=1e-8)

    def test_samples_follow_flow(self):
        times = self.orbit.trajectory.times
        for k in (40, 100, 200):
            expected = flow_map(self.hill, self.orbit.initial_state, times[k])
            np.testing.assert_allclose(self.orbit.trajectory.states[k], expected, atol=1e-7)

    def test_report(self):
        report = self.report
        self.assertIsNot(report.classification, OrbitClass.NEGATIVE_HYPERBOLIC)
        self.assertTrue(report.doubly_symmetric)
        self.assertFalse(report.signs_differ)
        self.assertEqual(report.structure_violations(), [])
        for key in ("coninv_0", "coninv_half", "slr_0", "slr_half", "product_gap"):
            self.assertLessEqual(report.residuals[key], 1e-6, key)
        self.assertLessEqual(report.residuals["flow_invariance"], 1e-7)
        self.assertLessEqual(report.residuals["sympl_drift"], 1e-8)
        self.assertLessEqual(report.residuals["energy_drift"], 1e-10)
        self.assertAlmostEqual(report.M0.trace, report.M_half.trace, delta=1e-9)

    def test_unreduced_monodromy(self):
        # eigenvalue one twice plus the reduced multipliers
        eigenvalues = np.linalg.eigvals(self.report.monodromy)
        reduced = self.report.multipliers
        for value in reduced:
            self.assertLess(np.min(np.abs(eigenvalues - value)), 1e-5)

    def test_quarter_shift(self):
        shifted = quarter_shift(self.orbit, self.hill)
        self.assertEqual((shifted.certificate.inv_index, shifted.certificate.second_index), (2, 1))
        self.assertLessEqual(shifted.certificate.max_residual, 1e-7)
        self.assertTrue(self.hill.involution(2).is_fixed(shifted.initial_state))
        self.assertAlmostEqual(shifted.period, self.orbit.period, places=14)
        np.testing.assert_array_equal(shifted.trajectory.states[10], self.orbit.trajectory.states[74])

        shifted_report = symmetric_orbit_report(self.hill, shifted)
        self.assertAlmostEqual(shifted_report.trace, self.report.trace, delta=1e-6)
        self.assertEqual(shifted_report.structure_violations(), [])

        back = quarter_shift(shifted, self.hill)
        self.assertEqual(back.certificate.inv_index, 1)
        rho2 = self.hill.involution(2)
        np.testing.assert_allclose(back.initial_state, rho2(self.orbit.initial_state), atol=1e-7)

    def test_serialization(self):
        data = self.orbit.to_dict()
        self.assertEqual(data["kind"], "orbit")
        self.assertEqual(data["certificate"]["kind"], "doubly_symmetric")
        restored = Orbit.from_dict(data)
        np.testing.assert_array_equal(restored.trajectory.states, self.orbit.trajectory.states)
        np.testing.assert_array_equal(restored.initial_state, self.orbit.initial_state)
        self.assertEqual(restored.orbit_id, self.orbit.orbit_id)
        self.assertEqual(restored.certificate.second_index, 2)


class TestHillSymmetric(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.hill = hill_system()
        cls.result = shoot_symmetric(cls.hill, 1, HILL_ENERGY, HILL_BRACKET, "retro")

    def test_certificate(self):
        certificate = self.result.orbit.certificate
        self.assertEqual(certificate.kind, "symmetric")
        self.assertIsNone(certificate.second_index)
        self.assertLessEqual(certificate.max_residual, 1e-7)
        self.assertAlmostEqual(self.result.orbit.period, 2.0 * self.result.event_time, places=12)

    def test_report(self):
        report = symmetric_orbit_report(self.hill, self.result.orbit)
        self.assertFalse(report.doubly_symmetric)
        self.assertEqual(report.structure_violations(), [])

    def test_quarter_shift_needs_double_symmetry(self):
        with self.assertRaises(SymmetryViolated):
            quarter_shift(self.result.orbit, self.hill)


class TestShootingErrors(unittest.TestCase):

    def test_bracket_outside_hill_region(self):
        with self.assertRaises(NoSignChange):
            shoot_doubly_symmetric(hill_system(), HILL_ENERGY, (0.8, 0.9), "retro")

    def test_degenerate_bracket(self):
        with self.assertRaises(NoSignChange):
            shoot_doubly_symmetric(hill_system(), HILL_ENERGY, (0.3, 0.3), "retro")

    def test_sample_count(self):
        with self.assertRaises(ValueError):
            ShootingOptions(samples=100)
        with self.assertRaises(ValueError):
            ShootingOptions(scan_points=1)


class TestHillFamily(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.hill = hill_system()
        cls.seed = shoot_doubly_symmetric(cls.hill, HILL_ENERGY, HILL_BRACKET, "retro")

    def test_family(self):
        family = continue_family(self.hill, self.seed, (-2.6, -2.4), 0.1)
        self.assertEqual(len(family), 3)
        energies = [energy for energy, _, _ in family.members]
        self.assertEqual(energies, sorted(energies))
        self.assertFalse(family.stalled)
        self.assertEqual(family.violations, [])
        for report in family.reports():
            self.assertIsNot(report.classification, OrbitClass.NEGATIVE_HYPERBOLIC)
            self.assertFalse(report.signs_differ)
        for transition in family.transitions:
            self.assertEqual(transition.boundary, "+")
        rows = family.to_rows()
        self.assertEqual(len(rows), 3)
        self.assertEqual(len(rows[0]), len(family.COLUMNS))
        self.assertEqual(family.to_dict()["kind"], "family")

    def test_retrograde_family(self):
        family = continue_family(self.hill, self.seed, (-4.0, -2.3), 0.05)
        self.assertEqual(len(family), 35)
        self.assertFalse(family.stalled)
        self.assertEqual(family.violations, [])
        self.assertEqual(family.transitions, [])
        energies = [energy for energy, _, _ in family.members]
        self.assertAlmostEqual(energies[0], -4.0, places=12)
        self.assertAlmostEqual(energies[-1], -2.3, places=12)
        periods = [result.orbit.period for _, result, _ in family.members]
        self.assertTrue(all(b > a for a, b in zip(periods[:-1], periods[1:])))
        for energy, result, report in family.members:
            self.assertLessEqual(result.orbit.closure, 1e-9, energy)
            self.assertLessEqual(result.orbit.certificate.max_residual, 1e-7, energy)
            self.assertIs(report.classification, OrbitClass.ELLIPTIC, energy)
            self.assertEqual(report.b_signs[0], report.b_signs[1], energy)
            self.assertEqual(report.structure_violations(), [], energy)

    def test_single_energy(self):
        family = continue_family(self.hill, self.seed, (HILL_ENERGY, HILL_ENERGY), 0.05)
        self.assertEqual(len(family), 1)
        self.assertIs(family.members[0][1], self.seed)

    def test_invalid_step(self):
        with self.assertRaises(ValueError):
            continue_family(self.hill, self.seed, (-2.6, -2.4), 0.0)


def langmuir_bracket(energy):
    # q2 range reachable at rest on the imaginary axis is (0, 3.5 / |E|)
    reach = 3.5 / abs(energy)
    return (0.1 * reach, 0.9 * reach)


class TestLangmuir(unittest.TestCase):

    ENERGIES = (-2.0, -3.0, -4.0)

    @classmethod
    def setUpClass(cls):
        cls.langmuir = langmuir_system()
        cls.results = {
            energy: shoot_doubly_symmetric(cls.langmuir, energy, langmuir_bracket(energy)) for energy in cls.ENERGIES
        }
        cls.reports = {
            energy: symmetric_orbit_report(cls.langmuir, result.orbit) for energy, result in cls.results.items()
        }

    def test_certificate(self):
        for energy, result in self.results.items():
            certificate = result.orbit.certificate
            self.assertEqual(certificate.kind, "doubly_symmetric")
            self.assertLessEqual(certificate.max_residual, 1e-7, energy)
            # start perpendicular on the imaginary axis
            x0 = result.orbit.initial_state
            self.assertEqual(x0[0], 0.0)
            self.assertEqual(x0[3], 0.0)
            self.assertEqual(x0[1], result.parameter)
            self.assertAlmostEqual(self.langmuir.H(x0), energy, delta=1e-12)

    def test_scaling(self):
        # orbits at different energies are rescaled copies, xi |E| is constant
        scaled = [result.parameter * abs(energy) for energy, result in self.results.items()]
        self.assertAlmostEqual(self.results[-3.0].parameter, 0.46902, delta=1e-4)
        for value in scaled[1:]:
            self.assertAlmostEqual(value, scaled[0], delta=1e-6)
        traces = [report.trace for report in self.reports.values()]
        for trace in traces[1:]:
            self.assertAlmostEqual(trace, traces[0], delta=1e-6)

    def test_not_negative_hyperbolic(self):
        for energy, report in self.reports.items():
            self.assertIsNot(report.classification, OrbitClass.NEGATIVE_HYPERBOLIC, energy)
            self.assertTrue(report.doubly_symmetric)
            self.assertEqual(report.b_signs[0], report.b_signs[1], energy)
            self.assertEqual(report.structure_violations(), [], energy)

    def test_quarter_shift(self):
        for energy, result in self.results.items():
            shifted = quarter_shift(result.orbit, self.langmuir)
            self.assertLessEqual(shifted.certificate.max_residual, 1e-7, energy)
            # brake point, both momenta vanish
            self.assertLessEqual(abs(shifted.initial_state[2]), 1e-7)
            self.assertLessEqual(abs(shifted.initial_state[3]), 1e-7)


class TestFamilyTransitions(unittest.TestCase):

    @staticmethod
    def member(energy, a):
        return (energy, None, report_from_couple(couple_from_A(a)))

    def test_degenerate_member_between(self):
        members = [
            self.member(-3.0, rotation(0.3)),
            self.member(-2.9, RealSL2.identity()),
            self.member(-2.8, RealSL2(2.0, 1.0, 1.0, 1.0)),
        ]
        transitions = family_transitions(members)
        self.assertEqual(len(transitions), 1)
        transition = transitions[0]
        self.assertEqual((transition.lower_energy, transition.upper_energy), (-3.0, -2.8))
        self.assertIs(transition.from_class, OrbitClass.ELLIPTIC)
        self.assertIs(transition.to_class, OrbitClass.POSITIVE_HYPERBOLIC)
        self.assertEqual(transition.boundary, "+")
        self.assertEqual(transition.degenerate_energy, -2.9)
        self.assertIs(transition.degenerate_class, OrbitClass.DEGENERATE_PLUS)
        self.assertEqual(transition.trace, 2.0)

    def test_touching_degenerate_member(self):
        members = [
            self.member(-3.0, rotation(0.3)),
            self.member(-2.9, RealSL2.identity()),
            self.member(-2.8, rotation(0.2)),
        ]
        self.assertEqual(family_transitions(members), [])

    def test_direct_transition_without_bisection(self):
        members = [self.member(-3.0, rotation(0.3)), self.member(-2.9, RealSL2(2.0, 1.0, 1.0, 1.0))]
        transitions = family_transitions(members)
        self.assertEqual(len(transitions), 1)
        self.assertEqual(transitions[0].boundary, "+")
        self.assertIsNone(transitions[0].degenerate_energy)


if __name__ == "__main__":
    unittest.main()

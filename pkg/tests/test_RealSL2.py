"""
Unit tests for the 2x2 real symplectic algebra
"""

from itertools import product
import unittest
import sys

import numpy as np

sys.path.append("src")
from orbit_krein.errors import DeterminantError, NotSLRForm, DegenerateTrace, CoupleError
from orbit_krein.real_sl2 import (
    RealSL2,
    RealCouple,
    OrbitClass,
    KreinSign,
    make_sl2,
    make_couple,
    classify,
    real_krein_sign,
    couple_from_A,
    couple_products,
    signs_differ_iff_negative,
    is_symmetric_couple,
    rescale,
    rotation,
)


def _integer_sl2(bound: int = 5):
    # All integer matrices with entries in [-bound, bound] and unit determinant
    entries = range(-bound, bound + 1)
    for a, b, c, d in product(entries, repeat=4):
        if a * d - b * c == 1:
            yield RealSL2(float(a), float(b), float(c), float(d))


class TestMakeSL2(unittest.TestCase):

    def test_identity(self):
        self.assertEqual(make_sl2(1, 0, 0, 1, 1e-12), RealSL2.identity())

    def test_valid(self):
        m = make_sl2(1, 1, 1, 2, 1e-12)
        self.assertEqual(m.as_list(), [[1.0, 1.0], [1.0, 2.0]])
        self.assertEqual(m.det, 1.0)

    def test_singular(self):
        with self.assertRaises(DeterminantError):
            make_sl2(1, 1, 1, 1, 1e-12)

    def test_error_is_value_error(self):
        with self.assertRaises(ValueError):
            make_sl2(2, 0, 0, 2)

    def test_non_finite(self):
        with self.assertRaises(ValueError):
            RealSL2(float("nan"), 0.0, 0.0, 1.0)

    def test_from_array(self):
        m = RealSL2.from_array(np.array([[2.0, 1.0], [3.0, 2.0]]))
        self.assertEqual(m, RealSL2(2.0, 1.0, 3.0, 2.0))
        with self.assertRaises(ValueError):
            RealSL2.from_array(np.eye(3))

    def test_inverse_and_product(self):
        m = make_sl2(2, 1, 3, 2)
        self.assertEqual(m @ m.inverse(), RealSL2.identity())
        self.assertEqual(m.inverse() @ m, RealSL2.identity())


class TestClassify(unittest.TestCase):

    def test_examples(self):
        self.assertIs(classify(RealSL2(3, 2, 4, 3)), OrbitClass.POSITIVE_HYPERBOLIC)
        self.assertIs(classify(RealSL2(0, 1, -1, 0)), OrbitClass.ELLIPTIC)
        self.assertIs(classify(RealSL2(-3, 2, 4, -3)), OrbitClass.NEGATIVE_HYPERBOLIC)

    def test_degenerate_band(self):
        self.assertIs(classify(RealSL2.identity()), OrbitClass.DEGENERATE_PLUS)
        self.assertIs(classify(RealSL2(-1, 0, 0, -1)), OrbitClass.DEGENERATE_MINUS)
        near = RealSL2(1.0 + 1e-10, 0.0, 0.0, 1.0)
        self.assertIs(classify(near, tol=1e-9), OrbitClass.DEGENERATE_PLUS)
        self.assertIs(classify(near, tol=1e-12), OrbitClass.POSITIVE_HYPERBOLIC)
        self.assertTrue(OrbitClass.DEGENERATE_MINUS.is_degenerate)
        self.assertFalse(OrbitClass.ELLIPTIC.is_degenerate)

    def test_string_values(self):
        self.assertEqual(OrbitClass.POSITIVE_HYPERBOLIC.value, "positive-hyperbolic")
        self.assertEqual(str(KreinSign.MINUS), "-")

    def test_multipliers(self):
        mult = RealSL2(3, 2, 4, 3).multipliers()
        self.assertAlmostEqual(float(np.prod(mult).real), 1.0, places=12)
        self.assertAlmostEqual(float(np.sum(mult).real), 6.0, places=12)
        mult = rotation(0.3).multipliers()
        np.testing.assert_allclose(np.abs(mult), [1.0, 1.0], atol=1e-12)


class TestRealKreinSign(unittest.TestCase):

    def test_examples(self):
        self.assertIs(real_krein_sign(RealSL2(3, 2, 4, 3)), KreinSign.PLUS)
        self.assertIs(real_krein_sign(RealSL2(-3, -2, -4, -3)), KreinSign.MINUS)
        with self.assertRaises(DegenerateTrace):
            real_krein_sign(RealSL2(1, 0, 5, 1))

    def test_not_slr(self):
        with self.assertRaises(NotSLRForm):
            real_krein_sign(RealSL2(1, 1, 1, 2))

    def test_relative_slr_tolerance(self):
        # |a - d| = 1e-3 on a matrix of norm ~1e5
        a = 500.0
        m = RealSL2(a, 2.0, (a * (a + 1e-3) - 1.0) / 2.0, a + 1e-3)
        with self.assertRaises(NotSLRForm):
            real_krein_sign(m)
        self.assertIs(real_krein_sign(m, slr_tol=1e-6), KreinSign.PLUS)

    def test_rotation_direction(self):
        for theta in np.linspace(0.1, 6.1, 40):
            if abs(abs(np.cos(theta)) - 1.0) < 1e-6:
                continue
            sign = real_krein_sign(rotation(theta))
            self.assertIs(sign, KreinSign.PLUS if np.sin(theta) > 0 else KreinSign.MINUS)

    def test_rescale_invariance(self):
        rng = np.random.default_rng(1)
        base = [RealSL2(3, 2, 4, 3), RealSL2(-3, -2, -4, -3), rotation(1.0), rotation(-2.0)]
        for m in base:
            sign = real_krein_sign(m)
            for mu in rng.uniform(-10.0, 10.0, 50):
                if abs(mu) < 1e-3:
                    continue
                scaled = rescale(m, mu)
                self.assertAlmostEqual(scaled.b, mu * mu * m.b)
                self.assertIs(real_krein_sign(scaled), sign)
        with self.assertRaises(ValueError):
            rescale(base[0], 0.0)


class TestCouples(unittest.TestCase):

    def test_couple_from_A(self):
        self.assertEqual(couple_from_A(RealSL2.identity()).B, RealSL2.identity())
        self.assertEqual(couple_from_A(RealSL2(1, 1, 1, 2)).B, RealSL2(2, 1, 1, 1))
        self.assertEqual(couple_from_A(RealSL2(1, 1, -2, -1)).B, RealSL2(-1, 1, -2, 1))

    def test_products(self):
        ab, ba = couple_products(couple_from_A(RealSL2(1, 1, 1, 2)))
        self.assertEqual(ab, RealSL2(3, 2, 4, 3))
        self.assertEqual(ba, RealSL2(3, 4, 2, 3))
        ab, ba = couple_products(couple_from_A(RealSL2(1, 1, -2, -1)))
        self.assertEqual(ab, RealSL2(-3, 2, 4, -3))
        self.assertEqual(ba, RealSL2(-3, -2, -4, -3))
        ab, ba = couple_products(couple_from_A(RealSL2.identity()))
        self.assertEqual(ab, RealSL2.identity())
        self.assertEqual(ba, RealSL2.identity())

    def test_signs_differ_examples(self):
        self.assertEqual(signs_differ_iff_negative(couple_from_A(RealSL2(1, 1, -2, -1))), (True, True))
        self.assertEqual(signs_differ_iff_negative(couple_from_A(RealSL2(1, 1, 1, 2))), (False, False))
        with self.assertRaises(DegenerateTrace):
            signs_differ_iff_negative(couple_from_A(RealSL2.identity()))

    def test_exhaustive_integer_sweep(self):
        checked = 0
        for a in _integer_sl2():
            couple = couple_from_A(a)
            ab, ba = couple_products(couple)
            # Product formulas hold exactly on integer entries
            diagonal = a.a * a.d + a.b * a.c
            self.assertEqual((ab.a, ab.d, ba.a, ba.d), (diagonal,) * 4)
            self.assertEqual((ab.b, ab.c), (2 * a.a * a.b, 2 * a.c * a.d))
            self.assertEqual((ba.b, ba.c), (2 * a.b * a.d, 2 * a.a * a.c))
            self.assertEqual(ab.trace, ba.trace)
            if abs(abs(ab.trace) - 2.0) <= 1e-9:
                continue
            differ, negative = signs_differ_iff_negative(couple)
            self.assertEqual(differ, negative, msg=str(a.as_list()))
            checked += 1
        self.assertGreater(checked, 100)

    def test_random_real_couples(self):
        rng = np.random.default_rng(7)
        for _ in range(2000):
            a, b, c = rng.uniform(-4.0, 4.0, 3)
            if abs(a) < 1e-3:
                continue
            d = (1.0 + b * c) / a
            couple = couple_from_A(RealSL2(a, b, c, d))
            ab, _ = couple_products(couple)
            if abs(abs(ab.trace) - 2.0) <= 1e-6:
                continue
            differ, negative = signs_differ_iff_negative(couple)
            self.assertEqual(differ, negative)
            self.assertEqual(negative, a * d < 0)

    def test_symmetric_couples_not_negative(self):
        rng = np.random.default_rng(11)
        for _ in range(10000):
            a, b = rng.uniform(-5.0, 5.0, 2)
            if abs(b) < 1e-6:
                continue
            m = RealSL2(a, b, (a * a - 1.0) / b, a)
            couple = RealCouple(m, m)
            self.assertTrue(is_symmetric_couple(couple, tol=1e-9))
            ab, _ = couple_products(couple)
            self.assertIsNot(classify(ab), OrbitClass.NEGATIVE_HYPERBOLIC)

    def test_is_symmetric_couple(self):
        m = RealSL2(2, 1, 3, 2)
        self.assertTrue(is_symmetric_couple(RealCouple(m, m)))
        self.assertFalse(is_symmetric_couple(couple_from_A(RealSL2(1, 1, 1, 2))))
        self.assertTrue(is_symmetric_couple(RealCouple(RealSL2.identity(), RealSL2.identity())))
        # both factors in SL^R but different
        self.assertFalse(is_symmetric_couple(RealCouple(m, RealSL2(2, 3, 1, 2))))
        self.assertFalse(is_symmetric_couple(RealCouple(m, RealSL2(2, 1, 3, 2 + 1e-6))))

    def test_make_couple(self):
        a = RealSL2(1, 1, 1, 2)
        couple = make_couple(a, RealSL2(2, 1, 1, 1))
        self.assertLess(couple.residual(), 1e-15)
        with self.assertRaises(CoupleError):
            make_couple(a, a)


if __name__ == "__main__":
    unittest.main()

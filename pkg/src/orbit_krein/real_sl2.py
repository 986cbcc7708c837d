#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""

Module containing the 2x2 real symplectic algebra used for reduced monodromies.

A reduced monodromy written in a symplectic basis adapted to the
real structure R = diag(1, -1) is an SL(2, R) matrix. At a symmetric point
it additionally lies in SL^R(2, R) = {[[a, b], [c, a]] : a^2 - bc = 1},
and the sign of its off-diagonal entry b is the real Krein sign (B-sign).

exports:
    RealSL2: immutable 2x2 matrix with unit determinant.
    RealCouple: pair (A, B) with R A R = B^-1.
    OrbitClass, KreinSign: enumerations.
    make_sl2, make_couple, classify, classify_trace, real_krein_sign, couple_from_A, couple_products,
    signs_differ_iff_negative, is_symmetric_couple, rescale, rotation.

Authors: orbit_krein developers.

"""

import logging

from enum import Enum
from math import isfinite, cos, sin
from dataclasses import dataclass
from typing import Tuple, Optional, Union

import numpy as np

from orbit_krein.errors import DeterminantError, NotSLRForm, DegenerateTrace, CoupleError


LOG = logging.getLogger(__name__)

# Width of the degenerate band around trace +-2
DEFAULT_TOL = 1e-9


class OrbitClass(Enum):
    """Trace classification of a 2x2 symplectic matrix."""

    POSITIVE_HYPERBOLIC = "positive-hyperbolic"
    NEGATIVE_HYPERBOLIC = "negative-hyperbolic"
    ELLIPTIC = "elliptic"
    DEGENERATE_PLUS = "degenerate-plus"
    DEGENERATE_MINUS = "degenerate-minus"

    @property
    def is_degenerate(self) -> bool:
        """True for trace +2 or -2."""
        return self in (OrbitClass.DEGENERATE_PLUS, OrbitClass.DEGENERATE_MINUS)


class KreinSign(Enum):
    """Real Krein sign, sign of the upper off-diagonal entry."""

    PLUS = "+"
    MINUS = "-"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class RealSL2:
    """
    Immutable 2x2 real matrix [[a, b], [c, d]].
    Unit determinant is checked by make_sl2, products of valid matrices stay valid.

    Attributes:
        a, b, c, d: row-major entries.
    """

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self) -> None:
        if not all(isfinite(v) for v in (self.a, self.b, self.c, self.d)):
            LOG.debug("entries %s", str((self.a, self.b, self.c, self.d)))
            raise ValueError("Matrix entries must be finite.")

    @classmethod
    def from_array(cls, array: Union[np.ndarray, list]) -> "RealSL2":
        """Builds matrix from a 2x2 array-like, no determinant check."""
        m = np.asarray(array, dtype=float)
        if m.shape != (2, 2):
            LOG.debug("array shape %s", str(m.shape))
            raise ValueError("Expected a 2x2 array.")
        return cls(float(m[0, 0]), float(m[0, 1]), float(m[1, 0]), float(m[1, 1]))

    @classmethod
    def identity(cls) -> "RealSL2":
        """Returns identity matrix."""
        return cls(1.0, 0.0, 0.0, 1.0)

    def as_array(self) -> np.ndarray:
        """Returns entries as numpy 2x2 array."""
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=float)

    def as_list(self) -> list:
        """Returns row-major nested list, used for serialization."""
        return [[self.a, self.b], [self.c, self.d]]

    @property
    def trace(self) -> float:
        """Returns a + d."""
        return self.a + self.d

    @property
    def det(self) -> float:
        """Returns ad - bc."""
        return self.a * self.d - self.b * self.c

    def norm_inf(self) -> float:
        """Maximum absolute row sum."""
        return max(abs(self.a) + abs(self.b), abs(self.c) + abs(self.d))

    def inverse(self) -> "RealSL2":
        """Inverse of a unit determinant matrix, [[d, -b], [-c, a]]."""
        return RealSL2(self.d, -self.b, -self.c, self.a)

    def reflect(self) -> "RealSL2":
        """Conjugation R M R by R = diag(1, -1)."""
        return RealSL2(self.a, -self.b, -self.c, self.d)

    def __matmul__(self, other: "RealSL2") -> "RealSL2":
        if not isinstance(other, RealSL2):
            return NotImplemented
        return RealSL2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def distance(self, other: "RealSL2") -> float:
        """Entrywise sup distance."""
        return max(abs(self.a - other.a), abs(self.b - other.b), abs(self.c - other.c), abs(self.d - other.d))

    def is_slr_form(self, tol: float = DEFAULT_TOL) -> bool:
        """True if |a - d| <= tol * max(1, ||M||_inf)."""
        return abs(self.a - self.d) <= tol * max(1.0, self.norm_inf())

    def multipliers(self) -> np.ndarray:
        """Eigenvalues (Floquet multipliers), complex array of length two."""
        return np.linalg.eigvals(self.as_array()).astype(complex)


@dataclass(frozen=True)
class RealCouple:
    """
    Pair of SL(2, R) matrices related by R A R = B^-1, R = diag(1, -1).
    In the reduced monodromy picture A is the half-period map Psi and B is Phi.

    Attributes:
        A: first map.
        B: second map, for exact couples B = [[d, b], [c, a]].
    """

    A: RealSL2
    B: RealSL2

    def residual(self) -> float:
        """Returns ||R A R - B^-1||_inf relative to max(1, ||A||_inf)."""
        return self.A.reflect().distance(self.B.inverse()) / max(1.0, self.A.norm_inf())


def make_sl2(a: float, b: float, c: float, d: float, tol: float = 1e-12) -> RealSL2:
    """
    Validated construction of an SL(2, R) matrix.

    Arguments:
        a, b, c, d: row-major entries.
        tol: accepted |ad - bc - 1|.

    Returns:
        RealSL2 instance.
    """

    m = RealSL2(float(a), float(b), float(c), float(d))
    if abs(m.det - 1.0) > tol:
        LOG.debug("entries %s , det %r , tol %r", str(m.as_list()), m.det, tol)
        raise DeterminantError("Determinant differs from one.")
    return m


def make_couple(a: RealSL2, b: RealSL2, tol: float = 1e-6) -> RealCouple:
    """
    Validated construction of a real couple from numerically obtained matrices.

    Arguments:
        a: first matrix.
        b: second matrix.
        tol: accepted relative residual of R A R = B^-1.

    Returns:
        RealCouple instance.
    """

    couple = RealCouple(a, b)
    if couple.residual() > tol:
        LOG.debug("A = %s , B = %s , residual %r", str(a.as_list()), str(b.as_list()), couple.residual())
        raise CoupleError("Matrices do not form a real couple.")
    return couple


def classify(m: RealSL2, tol: float = DEFAULT_TOL) -> OrbitClass:
    """
    Trace classification. Traces within tol of +2 / -2 are degenerate.

    Arguments:
        m: matrix to classify.
        tol: width of degenerate band.

    Returns:
        OrbitClass value.
    """

    return classify_trace(m.trace, tol)


def classify_trace(trace: float, tol: float = DEFAULT_TOL) -> OrbitClass:
    """Class of a bare trace value."""
    if abs(trace - 2.0) <= tol:
        return OrbitClass.DEGENERATE_PLUS
    if abs(trace + 2.0) <= tol:
        return OrbitClass.DEGENERATE_MINUS
    if trace > 2.0:
        return OrbitClass.POSITIVE_HYPERBOLIC
    if trace < -2.0:
        return OrbitClass.NEGATIVE_HYPERBOLIC
    return OrbitClass.ELLIPTIC


def real_krein_sign(m: RealSL2, tol: float = DEFAULT_TOL, slr_tol: Optional[float] = None) -> KreinSign:
    """
    Real Krein sign of an SL^R(2, R) matrix, the sign of its entry b.

    Arguments:
        m: matrix of the form [[a, b], [c, a]].
        tol: width of degenerate band.
        slr_tol: Optional relative tolerance for the a = d test, defaults to tol.

    Returns:
        KreinSign value.
    """

    if slr_tol is None:
        slr_tol = tol
    if not m.is_slr_form(slr_tol):
        LOG.debug("matrix %s , |a - d| = %r , tol %r", str(m.as_list()), abs(m.a - m.d), slr_tol)
        raise NotSLRForm("Diagonal entries differ, real Krein sign undefined.")
    if abs(abs(m.trace) - 2.0) <= tol:
        LOG.debug("matrix %s , trace %r", str(m.as_list()), m.trace)
        raise DegenerateTrace("Trace is +-2, real Krein sign undefined.")
    return KreinSign.PLUS if m.b > 0 else KreinSign.MINUS


def couple_from_A(a: RealSL2) -> RealCouple:
    """Completes A to the real couple (A, (R A R)^-1) = (A, [[d, b], [c, a]])."""
    return RealCouple(a, RealSL2(a.d, a.b, a.c, a.a))


def couple_products(couple: RealCouple) -> Tuple[RealSL2, RealSL2]:
    """
    Products of a real couple.
    Both have diagonal entries ad + bc and equal traces.

    Returns:
        tuple of A B and B A.
    """
    return couple.A @ couple.B, couple.B @ couple.A


def signs_differ_iff_negative(couple: RealCouple, tol: float = DEFAULT_TOL) -> Tuple[bool, bool]:
    """
    Evaluates both sides of the equivalence between differing real Krein signs
    of A B, B A and negative hyperbolicity.

    Arguments:
        couple: RealCouple.
        tol: width of degenerate band.

    Returns:
        tuple of:
            True if the real Krein signs of A B and B A differ.
            True if A B is negative hyperbolic.
    """

    ab, ba = couple_products(couple)
    if abs(abs(ab.trace) - 2.0) <= tol:
        LOG.debug("A = %s , trace(AB) %r", str(couple.A.as_list()), ab.trace)
        raise DegenerateTrace("Degenerate product trace.")
    differ = real_krein_sign(ab, tol) != real_krein_sign(ba, tol)
    return differ, classify(ab, tol) is OrbitClass.NEGATIVE_HYPERBOLIC


def is_symmetric_couple(couple: RealCouple, tol: float = DEFAULT_TOL) -> bool:
    """
    True if A = B and both are conjugated to their inverses by R.
    """

    scale = max(1.0, couple.A.norm_inf(), couple.B.norm_inf())
    if couple.A.distance(couple.B) > tol * scale:
        return False
    for m in (couple.A, couple.B):
        if m.reflect().distance(m.inverse()) > tol * max(1.0, m.norm_inf()):
            return False
    return True


def rescale(m: RealSL2, mu: float) -> RealSL2:
    """Conjugation by diag(mu, 1/mu): b -> mu^2 b, c -> c / mu^2."""
    if mu == 0:
        raise ValueError("Scaling factor must be non zero.")
    return RealSL2(m.a, mu * mu * m.b, m.c / (mu * mu), m.d)


def rotation(theta: float) -> RealSL2:
    """Rotation matrix [[cos, sin], [-sin, cos]]."""
    return RealSL2(cos(theta), sin(theta), -sin(theta), cos(theta))

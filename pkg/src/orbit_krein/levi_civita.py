#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""

Module containing the Levi-Civita symplectic lift L(z, w) = (z^2, w / (2 conj(z)))
of the complex squaring map, and the geometric lift of planar orbits.

Base points (q, p) are stored as real 4-vectors (Re q, Im q, Re p, Im p),
lifted points as complex pairs (z, w). L intertwines
sigma1(z, w) = (conj z, -conj w) and sigma2(z, w) = (-conj z, conj w)
with rho(q, p) = (conj q, -conj p).

exports:
    LCPoint, InvolutionCheck, LiftedCurve: data classes.
    lc_forward, lc_forward_array, lc_lift_point, lc_involution_check, lc_lift_orbit,
    sigma1, sigma2, base_rho.

Authors: orbit_krein developers.

"""

import logging

from dataclasses import dataclass, field
from typing import Sequence, Union, Any, Dict, List

import numpy as np

from orbit_krein.helper_functions import as_state, parse_branch, winding_number, branch_symbol, sup_norm
from orbit_krein.errors import OriginError, EvenWinding, BranchJump, SymmetryViolated


LOG = logging.getLogger(__name__)

# Signs of rho(q, p) = (q1, -q2, -p1, p2)
_RHO_SIGNS = np.array([1.0, -1.0, -1.0, 1.0])


@dataclass(frozen=True)
class LCPoint:
    """
    Regularized phase space point.

    Attributes:
        z: regularized position, non zero for lc_forward.
        w: regularized momentum.
    """

    z: complex
    w: complex

    def __neg__(self) -> "LCPoint":
        return LCPoint(-self.z, -self.w)

    def distance(self, other: "LCPoint") -> float:
        return max(abs(self.z - other.z), abs(self.w - other.w))


def sigma1(u: LCPoint) -> LCPoint:
    """(z, w) -> (conj z, -conj w)."""
    return LCPoint(np.conj(u.z), -np.conj(u.w))


def sigma2(u: LCPoint) -> LCPoint:
    """(z, w) -> (-conj z, conj w)."""
    return LCPoint(-np.conj(u.z), np.conj(u.w))


def base_rho(state: np.ndarray) -> np.ndarray:
    """(q, p) -> (conj q, -conj p)."""
    return _RHO_SIGNS * state


def lc_forward(u: LCPoint) -> np.ndarray:
    """
    Levi-Civita map.

    Arguments:
        u: LCPoint with z != 0.

    Returns:
        base state (q1, q2, p1, p2) with q = z^2, p = w / (2 conj z).
    """

    if u.z == 0:
        LOG.debug("point %s", str(u))
        raise OriginError("Levi-Civita map undefined at z = 0.")
    q = u.z * u.z
    p = u.w / (2.0 * np.conj(u.z))
    return np.array([q.real, q.imag, p.real, p.imag])


def lc_forward_array(y: Union[Sequence[float], np.ndarray]) -> np.ndarray:
    """Levi-Civita map on real coordinates (Re z, Im z, Re w, Im w)."""
    y = np.asarray(y, dtype=float)
    return lc_forward(LCPoint(complex(y[0], y[1]), complex(y[2], y[3])))


def lc_lift_point(state: Union[Sequence[float], np.ndarray], branch: Union[int, str] = 1) -> LCPoint:
    """
    Preimage of a base point under the two to one Levi-Civita map.

    Arguments:
        state: base point (q1, q2, p1, p2) with q != 0.
        branch: +1 for the principal square root of q, -1 for its negative.

    Returns:
        LCPoint.
    """

    state = as_state(state)
    q = complex(state[0], state[1])
    if q == 0:
        LOG.debug("state %s", str(state))
        raise OriginError("No Levi-Civita lift at the origin.")
    z = parse_branch(branch) * np.sqrt(q)
    w = 2.0 * np.conj(z) * complex(state[2], state[3])
    return LCPoint(complex(z), complex(w))


@dataclass
class InvolutionCheck:
    """
    Intertwining residuals of sigma1, sigma2 with rho over samples.

    Attributes:
        sigma1: max |L sigma1 u - rho L u|.
        sigma2: max |L sigma2 u - rho L u|.
        commute: max |sigma1 sigma2 u - sigma2 sigma1 u|.
        passed: True if all residuals are within tolerance.
    """

    sigma1: float
    sigma2: float
    commute: float
    passed: bool

    def to_dict(self) -> dict:
        return {"sigma1": self.sigma1, "sigma2": self.sigma2, "commute": self.commute, "passed": self.passed}


def lc_involution_check(samples: Sequence[LCPoint], tol: float = 1e-13) -> InvolutionCheck:
    """
    Evaluates L sigma_i = rho L and sigma1 sigma2 = sigma2 sigma1 on samples.
    Residuals are relative to max(1, |L u|).
    """

    res_1 = res_2 = res_c = 0.0
    for u in samples:
        image = lc_forward(u)
        scale = max(1.0, sup_norm(image))
        target = base_rho(image)
        res_1 = max(res_1, sup_norm(lc_forward(sigma1(u)) - target) / scale)
        res_2 = max(res_2, sup_norm(lc_forward(sigma2(u)) - target) / scale)
        res_c = max(res_c, sigma1(sigma2(u)).distance(sigma2(sigma1(u))))
    return InvolutionCheck(res_1, res_2, res_c, max(res_1, res_2, res_c) <= tol)


@dataclass
class LiftedCurve:
    """
    Closed curve in regularized coordinates lifted from a base orbit.

    Attributes:
        system: system name of the base orbit.
        orbit_id: identifier of the base orbit.
        branch: initial branch.
        winding: winding number of the base configuration curve.
        times: base time of every lifted sample, two base periods in total.
        z, w: complex arrays of lifted samples, first and last sample equal.
        residuals: sigma symmetry and closure residuals.
    """

    system: str
    orbit_id: str
    branch: int
    winding: int
    times: np.ndarray
    z: np.ndarray
    w: np.ndarray
    residuals: Dict[str, float] = field(default_factory=dict)

    def point(self, index: int) -> LCPoint:
        return LCPoint(complex(self.z[index]), complex(self.w[index]))

    def to_rows(self) -> List[List[float]]:
        """Rows (t, Re z, Im z, Re w, Im w)."""
        return [
            [float(t), float(z.real), float(z.imag), float(w.real), float(w.imag)]
            for t, z, w in zip(self.times, self.z, self.w)
        ]

    def to_dict(self) -> dict:
        return {
            "schema": "orbit-krein/1",
            "kind": "lifted-curve",
            "coordinates": "lc",
            "system": self.system,
            "orbit_id": self.orbit_id,
            "branch": branch_symbol(self.branch),
            "winding": self.winding,
            "columns": ["t", "z_re", "z_im", "w_re", "w_im"],
            "rows": self.to_rows(),
            "residuals": {k: float(v) for k, v in sorted(self.residuals.items())},
        }


def _track(q: np.ndarray, start: complex) -> np.ndarray:
    # Continuous square root of q along samples, nearest root to the previous value
    z = np.empty(len(q), dtype=complex)
    z[0] = start
    for k in range(1, len(q)):
        root = np.sqrt(q[k])
        previous = z[k - 1]
        candidate = root if abs(root - previous) <= abs(root + previous) else -root
        if abs(candidate - previous) >= abs(previous):
            LOG.debug("sample %i , previous z %r , candidate %r", k, previous, candidate)
            raise BranchJump("Square root branch jumped between samples.")
        z[k] = candidate
    return z


def lc_lift_orbit(orbit: Any, branch: Union[int, str] = 1, tol: float = 1e-6) -> LiftedCurve:
    """
    Lifts a rho-symmetric closed orbit with odd winding around the origin.
    The base orbit is traversed twice, the lift closes up to one closed curve
    symmetric for sigma1 and doubly symmetric via sigma2.
    Lifted samples keep the base sample time indexing.

    Arguments:
        orbit: Orbit whose trajectory samples are uniform in time and closed.
        branch: initial square root branch. Default +1.
        tol: accepted symmetry residuals.

    Returns:
        LiftedCurve instance.
    """

    sign = parse_branch(branch)
    states = np.asarray(orbit.trajectory.states, dtype=float)
    q = states[:, 0] + 1j * states[:, 1]
    p = states[:, 2] + 1j * states[:, 3]
    if np.any(np.abs(q) == 0.0):
        LOG.debug("orbit '%s' passes through the origin", orbit.orbit_id)
        raise OriginError("Base orbit passes through the origin.")

    winding = winding_number(states[:, :2])
    if winding % 2 == 0:
        LOG.debug("orbit '%s' winding %i", orbit.orbit_id, winding)
        raise EvenWinding("Even winding number, the lift splits into two loops.", winding=winding)

    n = len(states) - 1
    reversal = sup_norm(base_rho(states[::-1]) - states)
    if reversal > tol * max(1.0, sup_norm(states)):
        LOG.debug("orbit '%s' rho reversal residual %r", orbit.orbit_id, reversal)
        raise SymmetryViolated("Base orbit samples are not rho-symmetric.")

    # Two traversals of the base samples
    indices = np.concatenate((np.arange(n), np.arange(n + 1)))
    z = _track(q[indices], sign * np.sqrt(q[0]))
    w = 2.0 * np.conj(z) * p[indices]
    m = 2 * n
    period = float(orbit.trajectory.times[-1] - orbit.trajectory.times[0])
    times = np.linspace(0.0, 2.0 * period, m + 1)

    lifted = np.stack((z, w), axis=1)
    s1 = np.stack((np.conj(z), -np.conj(w)), axis=1)
    s2 = np.stack((-np.conj(z), np.conj(w)), axis=1)
    forward = np.arange(m)
    residuals = {
        "closure": sup_norm(lifted[m] - lifted[0]),
        "sigma1": sup_norm(s1[(m - forward) % m] - lifted[forward]),
        "sigma2": sup_norm(s2[(n - forward) % m] - lifted[forward]),
        "dsym": sup_norm(s2[0] - lifted[n]),
    }
    scale = max(1.0, sup_norm(lifted))
    for key, value in residuals.items():
        if value > tol * scale:
            LOG.debug("lift residuals %s", str(residuals))
            raise SymmetryViolated(f"Lifted curve residual '{key}' above tolerance.")

    return LiftedCurve(orbit.system, orbit.orbit_id, sign, winding, times, z, w, residuals)

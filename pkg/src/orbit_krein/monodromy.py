#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""

Module containing the reduction of monodromies of symmetric periodic orbits.

At a point x of Fix(rho) the quotient T_x Sigma / <X_H> of the energy level
tangent space gets a symplectic basis (e_plus, e_minus) of eigenvectors of d rho.
In such bases the half period maps Psi (from v(0) to v(1/2)) and Phi (back) form
a real couple, the reduced monodromies are M0 = Phi Psi and M_half = Psi Phi,
and the real Krein signs of both are the two B-signs of the orbit.

exports:
    ReducedFrame, MonodromyReport, CZParity, EulerSummary: result classes.
    build_reduced_frame, reduce_map, symmetric_orbit_report, report_from_couple,
    is_bad, sft_euler_characteristic, euler_summary.

Authors: orbit_krein developers.

"""

import logging

from enum import Enum
from dataclasses import dataclass, field
from typing import Optional, Tuple, List, Sequence, Union, Any

import numpy as np

from orbit_krein.systems import SystemDef, omega
from orbit_krein.flow import IntegrationOptions, integrate_variational
from orbit_krein.helper_functions import as_state, sup_norm
from orbit_krein.real_sl2 import (
    DEFAULT_TOL,
    RealSL2,
    RealCouple,
    OrbitClass,
    KreinSign,
    classify,
    real_krein_sign,
    make_couple,
)
from orbit_krein.errors import (
    DeterminantError,
    NotEnergyPreserving,
    TangencyError,
    ZeroVectorField,
    SymmetryViolated,
    DegenerateTrace,
)


LOG = logging.getLogger(__name__)

# Tolerance of the SL^R form test on computed reduced monodromies
SLR_TOL = 1e-6

# Gate of the determinant polish
DET_TOL = 1e-6


class CZParity(Enum):
    """Conley-Zehnder index parity."""

    ODD = "odd"
    EVEN = "even"
    UNDEFINED = "undefined"


def cz_parity(orbit_class: OrbitClass) -> CZParity:
    """Odd for elliptic and negative hyperbolic, even for positive hyperbolic."""
    if orbit_class.is_degenerate:
        return CZParity.UNDEFINED
    if orbit_class is OrbitClass.POSITIVE_HYPERBOLIC:
        return CZParity.EVEN
    return CZParity.ODD


@dataclass(frozen=True)
class ReducedFrame:
    """
    Symplectic basis of T_x Sigma / <X_H> adapted to d rho at a fixed point.

    Attributes:
        base: phase space point on Fix(rho).
        e_plus: tangent vector fixed by d rho, dH(e_plus) = 0.
        e_minus: tangent vector reversed by d rho, dH(e_minus) = 0.
        inv_index: one based involution index.
    """

    base: np.ndarray
    e_plus: np.ndarray
    e_minus: np.ndarray
    inv_index: int = 1

    def rescaled(self, mu: float) -> "ReducedFrame":
        """Frame (mu e_plus, e_minus / mu), the residual basis freedom."""
        if mu == 0:
            raise ValueError("Scaling factor must be non zero.")
        return ReducedFrame(self.base, mu * self.e_plus, self.e_minus / mu, self.inv_index)

    def residuals(self, system: SystemDef) -> dict:
        """Measured violations of the frame invariants."""
        grad = system.grad_H(self.base)
        rho = system.involution(self.inv_index)
        return {
            "energy": max(abs(float(grad @ self.e_plus)), abs(float(grad @ self.e_minus))),
            "plus": sup_norm(rho(self.e_plus) - self.e_plus),
            "minus": sup_norm(rho(self.e_minus) + self.e_minus),
            "omega": abs(omega(self.e_plus, self.e_minus) - 1.0),
        }


def build_reduced_frame(system: SystemDef, inv_index: int, x: np.ndarray, tol: float = 1e-8) -> ReducedFrame:
    """
    Deterministic reduced frame at a point of Fix(rho_i).
    e_plus spans T Fix(rho_i) intersected with ker dH and increases the chart coordinate.
    e_minus lies in the anti-invariant subspace (contained in ker dH at fixed points),
    orthogonal to X_H there, and scaled so that omega(e_plus, e_minus) = 1.

    Arguments:
        system: SystemDef.
        inv_index: one based involution index.
        x: point on Fix(rho_i).
        tol: accepted distance of x to the fixed set.

    Returns:
        ReducedFrame instance.
    """

    rho = system.involution(inv_index)
    x = as_state(x)
    if rho.residual(x) > tol:
        LOG.debug("point %s , fixed set residual %r , tol %r", str(x), rho.residual(x), tol)
        raise SymmetryViolated("Frame base point is not on the fixed set.")
    base = rho.project(x)

    field_ = system.vector_field(base)
    grad = system.grad_H(base)
    if sup_norm(field_) <= 1e-12:
        LOG.debug("point %s , vector field %s", str(base), str(field_))
        raise ZeroVectorField("Hamiltonian vector field vanishes.")

    chart, solve = rho.chart_index, rho.solve_index
    if abs(grad[solve]) <= 1e-12 * max(1.0, sup_norm(grad)):
        LOG.debug("point %s , gradient %s", str(base), str(grad))
        raise TangencyError("Energy level is tangent to the fixed set chart.")

    e_plus = np.zeros(4)
    e_plus[chart] = 1.0
    e_plus[solve] = -grad[chart] / grad[solve]

    first, second = rho.event_index, rho.residual_index
    w = np.zeros(4)
    w[first] = -field_[second]
    w[second] = field_[first]
    pairing = omega(e_plus, w)
    if abs(pairing) <= 1e-14:
        LOG.debug("point %s , e_plus %s , w %s", str(base), str(e_plus), str(w))
        raise TangencyError("Degenerate pairing of fixed and anti-invariant directions.")

    return ReducedFrame(base, e_plus, w / pairing, inv_index)


def reduce_map(
    matrix: np.ndarray, source: ReducedFrame, target: ReducedFrame, system: SystemDef, tol: float = DET_TOL
) -> RealSL2:
    """
    Matrix of the quotient map induced by a 4x4 linearized flow map.
    Entries are symplectic pairings, the X_H component pairs to zero with ker dH.

    Arguments:
        matrix: 4x4 linear map from T at source.base to T at target.base.
        source: ReducedFrame at the source point.
        target: ReducedFrame at the target point.
        system: SystemDef.
        tol: energy preservation and determinant gate.

    Returns:
        RealSL2 instance.
    """

    matrix = np.asarray(matrix, dtype=float)
    image_plus = matrix @ source.e_plus
    image_minus = matrix @ source.e_minus

    grad = system.grad_H(target.base)
    for image in (image_plus, image_minus):
        scale = max(1.0, float(np.linalg.norm(grad) * np.linalg.norm(image)))
        if abs(float(grad @ image)) > tol * scale:
            LOG.debug("dH(M e) = %r , scale %r", float(grad @ image), scale)
            raise NotEnergyPreserving("Map does not preserve the energy level tangent space.")

    a = omega(image_plus, target.e_minus)
    b = omega(image_minus, target.e_minus)
    c = omega(target.e_plus, image_plus)
    d = omega(target.e_plus, image_minus)

    det = a * d - b * c
    if abs(det - 1.0) > tol or det <= 0.0:
        LOG.debug("reduced matrix %s , det %r", str([[a, b], [c, d]]), det)
        raise DeterminantError("Reduced map is not symplectic.")
    scale = 1.0 / np.sqrt(det)
    return RealSL2(a * scale, b * scale, c * scale, d * scale)


def _coninv_residual(m: RealSL2) -> float:
    # ||R M R - M^-1|| relative to ||M||
    return m.reflect().distance(m.inverse()) / max(1.0, m.norm_inf())


def _slr_residual(m: RealSL2) -> float:
    return abs(m.a - m.d) / max(1.0, m.norm_inf())


def _sign_or_none(m: RealSL2, degenerate_tol: float) -> Optional[KreinSign]:
    try:
        return real_krein_sign(m, degenerate_tol, SLR_TOL)
    except DegenerateTrace:
        return None


@dataclass
class MonodromyReport:
    """
    Stability data of a symmetric periodic orbit.

    Attributes:
        system: system name.
        orbit_id: identifier of the orbit.
        monodromy: Optional unreduced 4x4 monodromy.
        M0: reduced monodromy at v(0).
        M_half: reduced monodromy at v(1/2).
        couple: real couple (Psi, Phi).
        b_signs: B-signs at v(0) and v(1/2), None when degenerate.
        classification: OrbitClass of M0.
        cz_parity: CZParity.
        doubly_symmetric: True if the orbit certificate is doubly symmetric.
        multipliers: Floquet multipliers of M0.
        residuals: measured numerical residuals.
    """

    system: str
    orbit_id: str
    monodromy: Optional[np.ndarray]
    M0: RealSL2
    M_half: RealSL2
    couple: RealCouple
    b_signs: Tuple[Optional[KreinSign], Optional[KreinSign]]
    classification: OrbitClass
    cz_parity: CZParity
    doubly_symmetric: bool = False
    multipliers: Optional[np.ndarray] = None
    residuals: dict = field(default_factory=dict)

    @property
    def trace(self) -> float:
        return self.M0.trace

    @property
    def signs_defined(self) -> bool:
        return self.b_signs[0] is not None and self.b_signs[1] is not None

    @property
    def signs_differ(self) -> Optional[bool]:
        """None when the signs are undefined."""
        if not self.signs_defined:
            return None
        return self.b_signs[0] != self.b_signs[1]

    def structure_violations(self, tol: float = SLR_TOL) -> List[str]:
        """
        Checks the structural statements on this report.

        Returns:
            list of violation messages, empty for a healthy report.
        """

        violations = []
        negative = self.classification is OrbitClass.NEGATIVE_HYPERBOLIC
        if self.signs_defined and self.signs_differ != negative:
            violations.append("B-signs differ without negative hyperbolicity or vice versa")
        if self.doubly_symmetric and negative:
            violations.append("doubly symmetric orbit is negative hyperbolic")
        if self.doubly_symmetric and self.signs_differ:
            violations.append("doubly symmetric orbit has different B-signs")
        if self.cz_parity is not cz_parity(self.classification):
            violations.append("Conley-Zehnder parity inconsistent with classification")
        for key in ("coninv_0", "coninv_half", "slr_0", "slr_half"):
            if self.residuals.get(key, 0.0) > tol:
                violations.append(f"residual {key} = {self.residuals[key]:.3e} above {tol:.1e}")
        return violations

    def to_dict(self) -> dict:
        """JSON serializable representation."""
        return {
            "schema": "orbit-krein/1",
            "kind": "monodromy-report",
            "system": self.system,
            "orbit_id": self.orbit_id,
            "monodromy": None if self.monodromy is None else [[float(v) for v in row] for row in self.monodromy],
            "M0": self.M0.as_list(),
            "M_half": self.M_half.as_list(),
            "psi": self.couple.A.as_list(),
            "phi": self.couple.B.as_list(),
            "trace": self.trace,
            "b_signs": [None if s is None else s.value for s in self.b_signs],
            "classification": self.classification.value,
            "cz_parity": self.cz_parity.value,
            "doubly_symmetric": self.doubly_symmetric,
            "multipliers": (
                None
                if self.multipliers is None
                else [[float(np.real(m)), float(np.imag(m))] for m in self.multipliers]
            ),
            "residuals": {k: float(v) for k, v in sorted(self.residuals.items())},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "MonodromyReport":
        """Inverse of to_dict."""
        couple = RealCouple(RealSL2.from_array(data["psi"]), RealSL2.from_array(data["phi"]))
        multipliers = data.get("multipliers")
        return cls(
            system=data["system"],
            orbit_id=data["orbit_id"],
            monodromy=None if data.get("monodromy") is None else np.asarray(data["monodromy"], dtype=float),
            M0=RealSL2.from_array(data["M0"]),
            M_half=RealSL2.from_array(data["M_half"]),
            couple=couple,
            b_signs=tuple(None if s is None else KreinSign(s) for s in data["b_signs"]),
            classification=OrbitClass(data["classification"]),
            cz_parity=CZParity(data["cz_parity"]),
            doubly_symmetric=bool(data.get("doubly_symmetric", False)),
            multipliers=None if multipliers is None else np.array([complex(re, im) for re, im in multipliers]),
            residuals=dict(data.get("residuals", {})),
        )


def report_from_couple(
    couple: RealCouple,
    system: str = "synthetic",
    orbit_id: str = "synthetic",
    degenerate_tol: float = DEFAULT_TOL,
    doubly_symmetric: bool = False,
    monodromy: Optional[np.ndarray] = None,
) -> MonodromyReport:
    """
    Builds a report from a real couple (Psi, Phi).

    Arguments:
        couple: RealCouple with A = Psi, B = Phi.

    Keyword arguments:
        system: system name. Default "synthetic".
        orbit_id: orbit identifier. Default "synthetic".
        degenerate_tol: width of the degenerate trace band. Default 1e-9.
        doubly_symmetric: certificate flag. Default False.
        monodromy: Optional unreduced monodromy.

    Returns:
        MonodromyReport instance.
    """

    m0 = couple.B @ couple.A
    m_half = couple.A @ couple.B
    orbit_class = classify(m0, degenerate_tol)
    signs = (_sign_or_none(m0, degenerate_tol), _sign_or_none(m_half, degenerate_tol))
    residuals = {
        "coninv_0": _coninv_residual(m0),
        "coninv_half": _coninv_residual(m_half),
        "slr_0": _slr_residual(m0),
        "slr_half": _slr_residual(m_half),
        "trace_gap": abs(m0.trace - m_half.trace),
        "couple": couple.residual(),
    }
    return MonodromyReport(
        system=system,
        orbit_id=orbit_id,
        monodromy=monodromy,
        M0=m0,
        M_half=m_half,
        couple=couple,
        b_signs=signs,
        classification=orbit_class,
        cz_parity=cz_parity(orbit_class),
        doubly_symmetric=doubly_symmetric,
        multipliers=m0.multipliers(),
        residuals=residuals,
    )


def symmetric_orbit_report(
    system: SystemDef,
    orbit: Any,
    tol: float = 1e-7,
    opts: Optional[IntegrationOptions] = None,
    degenerate_tol: float = DEFAULT_TOL,
) -> MonodromyReport:
    """
    Monodromy report of a symmetric periodic orbit.
    Psi is the half period map from v(0), Phi the half period map from v(1/2),
    both reduced in frames at the symmetric points.

    Arguments:
        system: SystemDef.
        orbit: Orbit with initial_state, period and certificate.
        tol: accepted symmetry residual.

    Keyword arguments:
        opts: Optional IntegrationOptions.
        degenerate_tol: width of the degenerate trace band.

    Returns:
        MonodromyReport instance.
    """

    LOG.info("Computing monodromy report for orbit '%s' ...", orbit.orbit_id)

    certificate = orbit.certificate
    if certificate.max_residual > tol:
        LOG.debug("certificate residuals %s , tol %r", str(certificate.residuals), tol)
        raise SymmetryViolated("Orbit symmetry certificate above tolerance.")

    inv_index = certificate.inv_index
    rho = system.involution(inv_index)
    half = 0.5 * orbit.period

    first = integrate_variational(system, orbit.initial_state, half, opts)
    x_half = first.end
    if rho.residual(x_half) > tol:
        LOG.debug("v(1/2) = %s , fixed set residual %r", str(x_half), rho.residual(x_half))
        raise SymmetryViolated("Half period point is not on the fixed set.")
    second = integrate_variational(system, rho.project(x_half), half, opts)

    frame_0 = build_reduced_frame(system, inv_index, orbit.initial_state, tol)
    frame_half = build_reduced_frame(system, inv_index, x_half, tol)

    d_half = first.final_frame
    d_back = second.final_frame
    d_full = d_back @ d_half

    psi = reduce_map(d_half, frame_0, frame_half, system)
    phi = reduce_map(d_back, frame_half, frame_0, system)
    couple = make_couple(psi, phi, SLR_TOL)

    report = report_from_couple(
        couple,
        system=system.name,
        orbit_id=orbit.orbit_id,
        degenerate_tol=degenerate_tol,
        doubly_symmetric=certificate.doubly_symmetric,
        monodromy=d_full,
    )

    direct = reduce_map(d_full, frame_0, frame_0, system)
    field_0 = system.vector_field(orbit.initial_state)
    report.residuals.update(
        {
            "product_gap": report.M0.distance(direct) / max(1.0, direct.norm_inf()),
            "closure": sup_norm(second.end - orbit.initial_state),
            "flow_invariance": sup_norm(d_full @ field_0 - field_0),
            "energy_drift": max(first.stats.max_energy_drift, second.stats.max_energy_drift),
            "sympl_drift": max(first.stats.max_sympl_drift, second.stats.max_sympl_drift),
        }
    )

    for violation in report.structure_violations():
        LOG.warning("Orbit '%s': %s.", orbit.orbit_id, violation)

    LOG.info("Done!")
    return report


def _entry_class(entry: Union[MonodromyReport, OrbitClass]) -> OrbitClass:
    return entry.classification if isinstance(entry, MonodromyReport) else OrbitClass(entry)


def is_bad(report: Union[MonodromyReport, OrbitClass], cover: int = 1) -> bool:
    """
    True for even covers of negative hyperbolic orbits.

    Arguments:
        report: MonodromyReport or OrbitClass of the underlying simple orbit.
        cover: covering multiplicity, at least 1.
    """

    if cover < 1:
        LOG.debug("cover %r", cover)
        raise ValueError("Cover multiplicity must be positive.")
    orbit_class = _entry_class(report)
    if orbit_class.is_degenerate:
        LOG.debug("classification %s", orbit_class.value)
        raise DegenerateTrace("Goodness undefined for degenerate orbits.")
    return cover % 2 == 0 and orbit_class is OrbitClass.NEGATIVE_HYPERBOLIC


def sft_euler_characteristic(entries: Sequence[Tuple[Union[MonodromyReport, OrbitClass], int]]) -> int:
    """
    Counts good positive hyperbolic entries minus elliptic and good negative hyperbolic entries.
    Bad entries do not contribute.

    Arguments:
        entries: sequence of (report or class, cover) tuples.

    Returns:
        integer Euler characteristic.
    """

    degenerate = [i for i, (entry, _) in enumerate(entries) if _entry_class(entry).is_degenerate]
    if degenerate:
        LOG.debug("degenerate entries at indices %s", str(degenerate))
        raise DegenerateTrace(f"Degenerate entries at indices {degenerate}.")

    chi = 0
    for entry, cover in entries:
        if is_bad(entry, cover):
            continue
        chi += 1 if _entry_class(entry) is OrbitClass.POSITIVE_HYPERBOLIC else -1
    return chi


@dataclass
class EulerSummary:
    """
    Stable orbit criterion for collections of doubly symmetric orbits.

    Attributes:
        chi: Euler characteristic of the collection.
        stable_orbit_exists: True when chi < 0 and an elliptic member is present.
        elliptic_indices: indices of elliptic entries.
        all_doubly_symmetric: True if every report entry carries a doubly symmetric certificate.
    """

    chi: int
    stable_orbit_exists: bool
    elliptic_indices: List[int]
    all_doubly_symmetric: bool

    def to_dict(self) -> dict:
        return {
            "chi_sft": self.chi,
            "stable_orbit_exists": self.stable_orbit_exists,
            "elliptic_indices": list(self.elliptic_indices),
            "all_doubly_symmetric": self.all_doubly_symmetric,
        }


def euler_summary(entries: Sequence[Tuple[Union[MonodromyReport, OrbitClass], int]]) -> EulerSummary:
    """
    Evaluates the Euler characteristic and flags an elliptic member when it is negative.
    Covers are taken from the entries.
    """

    chi = sft_euler_characteristic(entries)
    elliptic = [i for i, (entry, _) in enumerate(entries) if _entry_class(entry) is OrbitClass.ELLIPTIC]
    all_doubly = all(isinstance(entry, MonodromyReport) and entry.doubly_symmetric for entry, _ in entries)
    if chi < 0 and all_doubly and not elliptic:
        LOG.warning("Negative Euler characteristic for doubly symmetric collection without elliptic member.")
    return EulerSummary(chi, chi < 0 and bool(elliptic), elliptic, all_doubly)

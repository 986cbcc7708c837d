#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""

Module containing perpendicular shooting for symmetric and doubly symmetric
periodic orbits, the quarter period shift between the two symmetries,
and natural parameter continuation of orbit families in energy.

A start point on Fix(rho_i) at fixed energy is parameterized by the chart
coordinate xi. The shooting function F(xi) is the perpendicularity residual
(second anti-invariant coordinate of the target involution) at the requested
crossing of the target section (first anti-invariant coordinate = 0).

exports:
    ShootingOptions, SymmetryCertificate, Orbit, ShootResult, Transition, Family.
    shoot_doubly_symmetric, shoot_symmetric, quarter_shift, continue_family, family_transitions, certify.

Authors: orbit_krein developers.

"""

import logging

from dataclasses import dataclass, field, replace
from typing import Optional, Tuple, List, Dict, Callable, Union

import numpy as np

from scipy.optimize import brentq, root_scalar

from orbit_krein.systems import SystemDef, state_on_fixed_set, get_system
from orbit_krein.flow import IntegrationOptions, Trajectory, integrate, integrate_to_event, coordinate_event
from orbit_krein.monodromy import MonodromyReport, symmetric_orbit_report
from orbit_krein.real_sl2 import OrbitClass, classify_trace
from orbit_krein.helper_functions import parse_branch, branch_symbol, as_state, format_float, sup_norm
from orbit_krein.errors import (
    OrbitKreinError,
    EnergyUnreachable,
    EventNotFound,
    DomainExit,
    StepFailure,
    NoSignChange,
    NoConvergence,
    SymmetryViolated,
    ContinuationStalled,
)


LOG = logging.getLogger(__name__)

# Failures of a single shooting function evaluation that only remove a grid point
_SKIPPED_ERRORS = (EnergyUnreachable, EventNotFound, DomainExit, StepFailure)

# Trace distance at which a bisected transition counts as degenerate
TRANSITION_TOL = 1e-6


@dataclass
class ShootingOptions:
    """
    Shooting parameters.

    Attributes:
        occurrence: index of the target section crossing.
        scan_points: grid size of the sign change scan over the bracket.
        bisect_width: bracket width at which bisection hands over to the secant method.
        secant_tol: parameter tolerance of the secant method.
        residual_tol: accepted |F| at the root.
        t_max: search horizon of the crossing.
        event_tol: accepted |g| at a refined crossing.
        closure_tol: relative closure tolerance of the full period integration.
        certificate_samples: times sampled by the symmetry certificate.
        certificate_tol: accepted reversal residual.
        dsym_tol: accepted |rho2(v(0)) - v(1/2)|.
        samples: stored samples of the closed orbit, 1 mod 4.
        integration: IntegrationOptions.
    """

    occurrence: int = 1
    scan_points: int = 24
    bisect_width: float = 1e-3
    secant_tol: float = 1e-12
    residual_tol: float = 1e-8
    t_max: float = 50.0
    event_tol: float = 1e-11
    closure_tol: float = 1e-8
    certificate_samples: int = 32
    certificate_tol: float = 1e-7
    dsym_tol: float = 1e-8
    samples: int = 257
    integration: IntegrationOptions = field(default_factory=IntegrationOptions)

    def __post_init__(self) -> None:
        if self.samples < 5 or (self.samples - 1) % 4 != 0:
            LOG.debug("samples %r", self.samples)
            raise ValueError("Orbit sample count must be 1 mod 4.")
        if self.scan_points < 2:
            raise ValueError("Scan needs at least two grid points.")


@dataclass
class SymmetryCertificate:
    """
    Directly evaluated symmetry residuals of a periodic orbit.

    Attributes:
        inv_index: involution whose fixed set contains v(0) and v(1/2).
        second_index: Optional second involution of a doubly symmetric certificate.
        residuals: measured residuals by name.
    """

    inv_index: int
    second_index: Optional[int] = None
    residuals: Dict[str, float] = field(default_factory=dict)

    @property
    def doubly_symmetric(self) -> bool:
        return self.second_index is not None

    @property
    def kind(self) -> str:
        return "doubly_symmetric" if self.doubly_symmetric else "symmetric"

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values()) if self.residuals else 0.0

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "inv_index": self.inv_index,
            "second_index": self.second_index,
            "residuals": {k: float(v) for k, v in sorted(self.residuals.items())},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SymmetryCertificate":
        return cls(int(data["inv_index"]), data.get("second_index"), dict(data.get("residuals", {})))


@dataclass
class Orbit:
    """
    Periodic orbit record.

    Attributes:
        system: system name.
        orbit_id: deterministic identifier.
        initial_state: v(0), on Fix of the certificate involution.
        period: tau > 0.
        energy: energy value.
        certificate: SymmetryCertificate.
        trajectory: closed trajectory sampled uniformly in time, first and last sample equal.
        closure: |phi^tau(v(0)) - v(0)| from a full period integration.
    """

    system: str
    orbit_id: str
    initial_state: np.ndarray
    period: float
    energy: float
    certificate: SymmetryCertificate
    trajectory: Trajectory
    closure: float = 0.0

    def to_dict(self) -> dict:
        """JSON serializable representation."""
        return {
            "schema": "orbit-krein/1",
            "kind": "orbit",
            "system": self.system,
            "orbit_id": self.orbit_id,
            "initial_state": [float(v) for v in self.initial_state],
            "period": float(self.period),
            "energy": float(self.energy),
            "closure": float(self.closure),
            "certificate": self.certificate.to_dict(),
            "trajectory": self.trajectory.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Orbit":
        """Inverse of to_dict, the trajectory is restored without dense output."""
        rows = np.asarray(data["trajectory"]["rows"], dtype=float)
        trajectory = Trajectory(data["system"], rows[:, 0].copy(), rows[:, 1:5].copy())
        return cls(
            system=data["system"],
            orbit_id=data["orbit_id"],
            initial_state=as_state(data["initial_state"]),
            period=float(data["period"]),
            energy=float(data["energy"]),
            certificate=SymmetryCertificate.from_dict(data["certificate"]),
            trajectory=trajectory,
            closure=float(data.get("closure", 0.0)),
        )


@dataclass
class ShootResult:
    """
    Converged shooting run.

    Attributes:
        orbit: Orbit.
        parameter: chart coordinate xi of the start point.
        branch: +1 / -1 momentum branch.
        start_index: involution of the start fixed set.
        target_index: involution of the target section.
        iterates: evaluated (xi, F) pairs in order.
        event_time: time of the target crossing (quarter or half period).
    """

    orbit: Orbit
    parameter: float
    branch: int
    start_index: int
    target_index: int
    iterates: List[Tuple[float, float]] = field(default_factory=list)
    event_time: float = 0.0

    @property
    def residual(self) -> float:
        """|F| at the returned parameter."""
        for xi, value in reversed(self.iterates):
            if xi == self.parameter:
                return abs(value)
        return float("nan")

    def to_dict(self) -> dict:
        return {
            "parameter": self.parameter,
            "branch": branch_symbol(self.branch),
            "start_index": self.start_index,
            "target_index": self.target_index,
            "event_time": self.event_time,
            "iterates": [[float(x), float(v)] for x, v in self.iterates],
        }


class _ShootingFunction:
    """Memoized perpendicularity residual with evaluation trace."""

    def __init__(
        self,
        system: SystemDef,
        start_index: int,
        target_index: int,
        energy: float,
        branch: int,
        opts: ShootingOptions,
    ) -> None:
        self.system = system
        self.start_index = start_index
        self.target = system.involution(target_index)
        self.energy = energy
        self.branch = branch
        self.opts = opts
        self.event = coordinate_event(self.target.event_index, 0, opts.occurrence, opts.event_tol)
        self.iterates: List[Tuple[float, float]] = []
        self._memory: Dict[float, Tuple[float, float, np.ndarray]] = {}

    def evaluate(self, xi: float) -> Tuple[float, float, np.ndarray]:
        """Returns F(xi), the crossing time and the start state."""
        xi = float(xi)
        if xi not in self._memory:
            start = state_on_fixed_set(self.system, self.start_index, xi, self.energy, self.branch)
            t_star, x_star, _ = integrate_to_event(
                self.system, start, self.event, self.opts.t_max, self.opts.integration
            )
            self._memory[xi] = (float(x_star[self.target.residual_index]), t_star, start)
            self.iterates.append((xi, self._memory[xi][0]))
        return self._memory[xi]

    def __call__(self, xi: float) -> float:
        return self.evaluate(xi)[0]

    def safe(self, xi: float) -> Optional[float]:
        """F(xi) or None when the grid point has to be skipped."""
        try:
            return self(xi)
        except _SKIPPED_ERRORS as e:
            LOG.debug("shooting parameter %r skipped: %s", xi, str(e))
            return None


def _sign_changes(function: _ShootingFunction, bracket: Tuple[float, float], points: int) -> List[Tuple[float, float]]:
    # Consecutive valid grid points with opposite signs, in grid order
    grid = np.linspace(bracket[0], bracket[1], points)
    values = [function.safe(xi) for xi in grid]
    intervals = []
    for k in range(points - 1):
        left, right = values[k], values[k + 1]
        if left is None or right is None:
            continue
        if left == 0.0:
            intervals.append((grid[k], grid[k]))
        elif left * right < 0.0:
            intervals.append((grid[k], grid[k + 1]))
    if values[-1] == 0.0:
        intervals.append((grid[-1], grid[-1]))
    return intervals


def _refine_root(function: _ShootingFunction, interval: Tuple[float, float], opts: ShootingOptions) -> float:
    # Traced bisection down to bisect_width, then secant with a bracketed fallback
    low, high = interval
    if low == high:
        return low
    f_low = function(low)
    while high - low > opts.bisect_width:
        middle = 0.5 * (low + high)
        f_middle = function(middle)
        if f_middle == 0.0:
            return middle
        if f_low * f_middle < 0.0:
            high = middle
        else:
            low, f_low = middle, f_middle

    try:
        result = root_scalar(function, x0=low, x1=high, method="secant", xtol=opts.secant_tol, maxiter=50)
        candidate = result.root if result.converged else None
    except _SKIPPED_ERRORS:
        candidate = None
    if candidate is None or not low <= candidate <= high or abs(function(candidate)) > opts.residual_tol:
        candidate = brentq(function, low, high, xtol=opts.secant_tol, rtol=4 * np.finfo(float).eps)
    return float(candidate)


def _solve_parameter(function: _ShootingFunction, bracket: Tuple[float, float], opts: ShootingOptions) -> float:
    # Tries every sign change interval in order, rejects jumps of F
    low, high = sorted((float(bracket[0]), float(bracket[1])))
    if low == high:
        LOG.debug("bracket %s", str(bracket))
        raise NoSignChange("Degenerate shooting bracket.")

    intervals = _sign_changes(function, (low, high), opts.scan_points)
    if not intervals:
        LOG.debug("bracket %s , iterates %s", str(bracket), str(function.iterates))
        raise NoSignChange("Shooting function has no sign change in bracket.")

    for interval in intervals:
        try:
            xi = _refine_root(function, interval, opts)
        except _SKIPPED_ERRORS + (ValueError,) as e:
            LOG.debug("interval %s rejected: %s", str(interval), str(e))
            continue
        if abs(function(xi)) <= opts.residual_tol:
            return xi
        LOG.debug("interval %s rejected, |F| = %r at %r", str(interval), abs(function(xi)), xi)

    LOG.debug("bracket %s , intervals %s", str(bracket), str(intervals))
    raise NoSignChange("No sign change interval of the shooting function holds a root.")


def _orbit_id(system: SystemDef, energy: float, certificate: SymmetryCertificate) -> str:
    return f"{system.name}-E{format_float(energy)}-{certificate.kind}-{certificate.inv_index}"


def certify(
    system: SystemDef,
    x0: np.ndarray,
    period: float,
    inv_index: int,
    second_index: Optional[int],
    opts: ShootingOptions,
) -> Tuple[SymmetryCertificate, float]:
    """
    Evaluates closure and symmetry residuals by one full period integration.
    Reversal residuals compare rho(v(tau - t)) with v(t) at certificate_samples times.

    Arguments:
        system: SystemDef.
        x0: initial state.
        period: orbit period.
        inv_index: involution of the symmetric points v(0), v(1/2).
        second_index: Optional second involution of a doubly symmetric orbit.
        opts: ShootingOptions.

    Returns:
        tuple of certificate and relative closure residual.
    """

    full = integrate(system, x0, period, opts.integration)
    closure = sup_norm(full.end - x0) / max(1.0, sup_norm(x0))

    def v(t: np.ndarray) -> np.ndarray:
        return np.atleast_2d(full.dense(t)).T

    times = period * np.arange(opts.certificate_samples) / opts.certificate_samples
    rho = system.involution(inv_index)
    forward = v(times)
    residuals = {
        "reversal": sup_norm(rho(v(period - times)) - forward),
        "fixed_0": rho.residual(x0),
        "fixed_half": rho.residual(full.dense(0.5 * period)),
    }
    if second_index is not None:
        other = system.involution(second_index)
        # Reflection times wrapped into the integrated period
        residuals["reversal_2"] = sup_norm(other(v(np.mod(0.5 * period - times, period))) - forward)
        residuals["dsym"] = sup_norm(other(x0) - full.dense(0.5 * period))

    return SymmetryCertificate(inv_index, second_index, residuals), closure


def _check_certificate(certificate: SymmetryCertificate, closure: float, opts: ShootingOptions) -> None:
    if closure > opts.closure_tol:
        LOG.debug("closure residual %r , tol %r", closure, opts.closure_tol)
        raise NoConvergence("Orbit does not close after one period.")
    for key, value in certificate.residuals.items():
        bound = opts.dsym_tol if key == "dsym" else opts.certificate_tol
        if value > bound:
            LOG.debug("certificate residuals %s", str(certificate.residuals))
            raise SymmetryViolated(f"Symmetry residual '{key}' above tolerance.")


def _assemble(arc: Trajectory, count: int, reflections: List[Tuple[Callable, int]]) -> np.ndarray:
    # Fills a closed sample grid of count points from the arc samples [0, m] and reflections.
    # Each reflection (rho, pivot) defines v[k] = rho(v[pivot - k]) for the next block of indices.
    n = count - 1
    m = len(arc.states) - 1
    samples = np.zeros((count, 4))
    samples[: m + 1] = arc.states
    filled = m
    for rho, pivot in reflections:
        upper = min(pivot, n)
        for k in range(filled + 1, upper + 1):
            samples[k] = rho(samples[pivot - k])
        filled = upper
    return samples


def _build_orbit(
    system: SystemDef,
    x0: np.ndarray,
    energy: float,
    arc_time: float,
    fraction: int,
    inv_index: int,
    second_index: Optional[int],
    opts: ShootingOptions,
) -> Orbit:
    # Orbit from the arc [0, tau / fraction] by reflection, verified by direct integration
    period = fraction * arc_time
    n = opts.samples - 1
    arc = integrate(system, x0, arc_time, opts.integration).resample(n // fraction + 1)
    rho = system.involution(inv_index)
    if second_index is None:
        reflections = [(rho, n)]
    else:
        reflections = [(system.involution(second_index), n // 2), (rho, n)]
    samples = _assemble(arc, opts.samples, reflections)
    samples[-1] = samples[0]

    certificate, closure = certify(system, x0, period, inv_index, second_index, opts)
    _check_certificate(certificate, closure, opts)

    stats = arc.stats
    trajectory = Trajectory(system.name, np.linspace(0.0, period, opts.samples), samples, None, stats)
    return Orbit(system.name, _orbit_id(system, energy, certificate), x0, period, energy, certificate, trajectory, closure)


def _shoot(
    system: SystemDef,
    start_index: int,
    target_index: int,
    energy: float,
    bracket: Tuple[float, float],
    branch: Union[int, str],
    opts: Optional[ShootingOptions],
) -> ShootResult:
    opts = opts or ShootingOptions()
    sign = parse_branch(branch)
    function = _ShootingFunction(system, start_index, target_index, energy, sign, opts)
    xi = _solve_parameter(function, bracket, opts)
    _, event_time, x0 = function.evaluate(xi)

    if start_index == target_index:
        orbit = _build_orbit(system, x0, energy, event_time, 2, start_index, None, opts)
    else:
        orbit = _build_orbit(system, x0, energy, event_time, 4, start_index, target_index, opts)

    LOG.info("Converged %s orbit at xi = %r, period %r.", orbit.certificate.kind, xi, orbit.period)
    return ShootResult(orbit, xi, sign, start_index, target_index, list(function.iterates), event_time)


def shoot_doubly_symmetric(
    system: SystemDef,
    energy: float,
    bracket: Tuple[float, float],
    branch: Union[int, str] = 1,
    opts: Optional[ShootingOptions] = None,
) -> ShootResult:
    """
    Shoots perpendicularly from Fix(rho1) to a perpendicular crossing of Fix(rho2).
    The period is four times the crossing time.

    Arguments:
        system: SystemDef with two involutions.
        energy: energy of the orbit.
        bracket: range of the Fix(rho1) chart coordinate.
        branch: momentum branch. Default +1.
        opts: Optional ShootingOptions.

    Returns:
        ShootResult with a doubly symmetric certificate.
    """

    if not system.is_doubly_real:
        LOG.debug("system '%s'", system.name)
        raise ValueError("Doubly symmetric shooting needs two involutions.")
    LOG.info("Shooting doubly symmetric orbit of '%s' at energy %r ...", system.name, energy)
    return _shoot(system, 1, 2, energy, bracket, branch, opts)


def shoot_symmetric(
    system: SystemDef,
    inv_index: int,
    energy: float,
    bracket: Tuple[float, float],
    branch: Union[int, str] = 1,
    opts: Optional[ShootingOptions] = None,
) -> ShootResult:
    """
    Shoots perpendicularly from Fix(rho_i) back to a perpendicular crossing of Fix(rho_i).
    The period is twice the crossing time.

    Arguments:
        system: SystemDef.
        inv_index: one based involution index.
        energy: energy of the orbit.
        bracket: range of the chart coordinate.
        branch: momentum or root branch. Default +1.
        opts: Optional ShootingOptions.

    Returns:
        ShootResult with a symmetric certificate.
    """

    LOG.info("Shooting symmetric orbit of '%s' for involution %i at energy %r ...", system.name, inv_index, energy)
    return _shoot(system, inv_index, inv_index, energy, bracket, branch, opts)


def quarter_shift(
    orbit: Orbit, system: Optional[SystemDef] = None, opts: Optional[ShootingOptions] = None
) -> Orbit:
    """
    Reparametrizes a doubly symmetric orbit by a quarter period.
    The result is symmetric for the second involution and doubly symmetric
    with respect to the first one, its certificate is evaluated anew.

    Arguments:
        orbit: doubly symmetric Orbit.
        system: Optional SystemDef, looked up by name by default.
        opts: Optional ShootingOptions.

    Returns:
        shifted Orbit.
    """

    if not orbit.certificate.doubly_symmetric:
        LOG.debug("orbit '%s' certificate %s", orbit.orbit_id, orbit.certificate.kind)
        raise SymmetryViolated("Quarter shift needs a doubly symmetric orbit.")
    system = system or get_system(orbit.system)
    opts = opts or ShootingOptions(samples=len(orbit.trajectory.states))

    new_index, new_second = orbit.certificate.second_index, orbit.certificate.inv_index
    x0 = integrate(system, orbit.initial_state, 0.25 * orbit.period, opts.integration).end
    rho = system.involution(new_index)
    if rho.residual(x0) > opts.certificate_tol:
        LOG.debug("quarter point %s , fixed set residual %r", str(x0), rho.residual(x0))
        raise SymmetryViolated("Quarter point is not on the fixed set of the second involution.")
    x0 = rho.project(x0)

    certificate, closure = certify(system, x0, orbit.period, new_index, new_second, opts)
    _check_certificate(certificate, closure, opts)

    n = len(orbit.trajectory.states) - 1
    if n % 4 != 0:
        raise ValueError("Orbit sample count must be 1 mod 4.")
    shift = n // 4
    samples = np.roll(orbit.trajectory.states[:-1], -shift, axis=0)
    samples = np.vstack((samples, samples[:1]))
    samples[0] = samples[-1] = x0
    trajectory = Trajectory(orbit.system, orbit.trajectory.times.copy(), samples, None, orbit.trajectory.stats)

    return Orbit(
        orbit.system,
        _orbit_id(system, orbit.energy, certificate),
        x0,
        orbit.period,
        orbit.energy,
        certificate,
        trajectory,
        closure,
    )


@dataclass
class Transition:
    """
    Classification change between consecutive family members.

    Attributes:
        lower_energy, upper_energy: energies of the two members.
        from_class, to_class: their classes.
        boundary: "+" for trace 2, "-" for trace -2, "+-" when both are crossed.
        degenerate_energy: Optional bisected energy with |trace -+ 2| <= 1e-6.
        degenerate_class: Optional degenerate class at that energy.
        trace: Optional trace at that energy.
    """

    lower_energy: float
    upper_energy: float
    from_class: OrbitClass
    to_class: OrbitClass
    boundary: str
    degenerate_energy: Optional[float] = None
    degenerate_class: Optional[OrbitClass] = None
    trace: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "lower_energy": self.lower_energy,
            "upper_energy": self.upper_energy,
            "from": self.from_class.value,
            "to": self.to_class.value,
            "boundary": self.boundary,
            "degenerate_energy": self.degenerate_energy,
            "degenerate_class": None if self.degenerate_class is None else self.degenerate_class.value,
            "trace": self.trace,
        }


@dataclass
class Family:
    """
    Orbit family in energy order.

    Attributes:
        system: system name.
        members: list of (energy, ShootResult, MonodromyReport) in increasing energy.
        transitions: class transitions between consecutive nondegenerate members.
        violations: energies of doubly symmetric negative hyperbolic members.
        stalled: True when continuation stopped early.
    """

    system: str
    members: List[Tuple[float, ShootResult, MonodromyReport]] = field(default_factory=list)
    transitions: List[Transition] = field(default_factory=list)
    violations: List[float] = field(default_factory=list)
    stalled: bool = False

    COLUMNS = ("energy", "q1_start", "period", "trace", "b_sign_0", "b_sign_half", "class")

    def __len__(self) -> int:
        return len(self.members)

    def reports(self) -> List[MonodromyReport]:
        return [report for _, _, report in self.members]

    def to_rows(self) -> List[list]:
        """Rows in COLUMNS order, undefined signs as empty strings."""
        rows = []
        for energy, result, report in self.members:
            signs = ["" if s is None else s.value for s in report.b_signs]
            rows.append(
                [energy, result.parameter, result.orbit.period, report.trace, signs[0], signs[1], report.classification.value]
            )
        return rows

    def to_dict(self) -> dict:
        return {
            "schema": "orbit-krein/1",
            "kind": "family",
            "system": self.system,
            "columns": list(self.COLUMNS),
            "rows": self.to_rows(),
            "transitions": [t.to_dict() for t in self.transitions],
            "violations": list(self.violations),
            "stalled": self.stalled,
        }


def _energy_grid(energy_range: Tuple[float, float], step: float) -> List[float]:
    low, high = sorted(energy_range)
    if step <= 0.0:
        raise ValueError("Continuation step must be positive.")
    count = int(np.floor((high - low) / step + 1e-9))
    return [low + k * step for k in range(count + 1)]


class _Continuation:
    """Warm started shooting along a monotone sequence of energies."""

    def __init__(self, system: SystemDef, seed: ShootResult, opts: ShootingOptions, min_step: float) -> None:
        self.system = system
        self.seed = seed
        self.opts = opts
        self.min_step = min_step
        self.narrow = replace(opts, scan_points=6)

    def _bracket(self, history: List[Tuple[float, float]], energy: float) -> Tuple[float, float]:
        # Linear extrapolation of xi(E) with a bracket covering twice the predicted change
        (e1, x1) = history[-1]
        if len(history) > 1 and history[-2][0] != e1:
            e0, x0 = history[-2]
            slope = (x1 - x0) / (e1 - e0)
        else:
            slope = 0.0
        predicted = x1 + slope * (energy - e1)
        width = max(2.0 * abs(predicted - x1), 10.0 * self.opts.bisect_width)
        return predicted - width, predicted + width

    def shoot_at(self, history: List[Tuple[float, float]], energy: float) -> ShootResult:
        return _shoot(
            self.system,
            self.seed.start_index,
            self.seed.target_index,
            energy,
            self._bracket(history, energy),
            self.seed.branch,
            self.narrow,
        )

    def march(self, targets: List[float], results: Dict[float, ShootResult]) -> None:
        # Visits targets in order from the seed, halving the step on failure
        history = [(self.seed.orbit.energy, self.seed.parameter)]
        current = self.seed.orbit.energy
        for target in targets:
            while current != target:
                step = target - current
                while True:
                    trial = target if abs(step) >= abs(target - current) else current + step
                    try:
                        result = self.shoot_at(history, trial)
                        break
                    except OrbitKreinError as e:
                        step *= 0.5
                        LOG.warning("Continuation failed at energy %r (%s), halving step.", trial, str(e))
                        if abs(step) < self.min_step:
                            LOG.debug("energy %r , step %r , min_step %r", current, step, self.min_step)
                            raise ContinuationStalled("Continuation step underflow.") from e
                history.append((trial, result.parameter))
                current = trial
                if trial == target:
                    results[target] = result


def _report(system: SystemDef, result: ShootResult, opts: ShootingOptions) -> MonodromyReport:
    return symmetric_orbit_report(system, result.orbit, opts.certificate_tol, opts.integration)


def _boundary(first: OrbitClass, second: OrbitClass) -> str:
    pair = {first, second}
    if pair == {OrbitClass.ELLIPTIC, OrbitClass.POSITIVE_HYPERBOLIC}:
        return "+"
    if pair == {OrbitClass.ELLIPTIC, OrbitClass.NEGATIVE_HYPERBOLIC}:
        return "-"
    return "+-"


def _bisect_transition(
    system: SystemDef,
    continuation: _Continuation,
    lower: Tuple[float, ShootResult, MonodromyReport],
    upper: Tuple[float, ShootResult, MonodromyReport],
    target: float,
    opts: ShootingOptions,
) -> Tuple[Optional[float], Optional[float]]:
    # Bisection in energy on trace - target, warm started from the nearer member
    e_low, r_low, rep_low = lower
    e_high, r_high, _ = upper
    side_low = rep_low.trace - target
    history_low = [(e_low, r_low.parameter)]
    history_high = [(e_high, r_high.parameter)]
    for _ in range(60):
        middle = 0.5 * (e_low + e_high)
        history = history_low if middle - e_low <= e_high - middle else history_high
        result = continuation.shoot_at(history, middle)
        trace = _report(system, result, opts).trace
        if abs(trace - target) <= TRANSITION_TOL:
            return middle, trace
        if (trace - target) * side_low > 0.0:
            e_low, history_low = middle, [(middle, result.parameter)]
        else:
            e_high, history_high = middle, [(middle, result.parameter)]
        if e_high - e_low <= 1e-14:
            break
    return None, None


def family_transitions(
    members: List[Tuple[float, ShootResult, MonodromyReport]],
    system: Optional[SystemDef] = None,
    continuation: Optional[_Continuation] = None,
    opts: Optional[ShootingOptions] = None,
) -> List[Transition]:
    """
    Class transitions between consecutive nondegenerate members.
    Degenerate members between the pair are skipped over; one lying on the
    crossed boundary gives the degenerate energy directly, otherwise
    the pair is bisected in energy when a continuation is given.

    Arguments:
        members: list of (energy, ShootResult, MonodromyReport) in increasing energy.

    Keyword arguments:
        system: Optional SystemDef, needed for bisection.
        continuation: Optional warm start continuation, needed for bisection.
        opts: Optional ShootingOptions.

    Returns:
        list of Transition.
    """

    opts = opts or ShootingOptions()
    kept = [member for member in members if not member[2].classification.is_degenerate]
    transitions = []
    for lower, upper in zip(kept[:-1], kept[1:]):
        first, second = lower[2].classification, upper[2].classification
        if first is second:
            continue
        transition = Transition(lower[0], upper[0], first, second, _boundary(first, second))
        if transition.boundary != "+-":
            target = 2.0 if transition.boundary == "+" else -2.0
            between = [m for m in members if lower[0] < m[0] < upper[0]]
            hit = next((m for m in between if abs(m[2].trace - target) <= TRANSITION_TOL), None)
            energy, trace = (hit[0], hit[2].trace) if hit is not None else (None, None)
            if hit is None and continuation is not None:
                try:
                    energy, trace = _bisect_transition(system, continuation, lower, upper, target, opts)
                except OrbitKreinError as e:
                    LOG.warning("Transition bisection between %r and %r failed: %s", lower[0], upper[0], str(e))
            if energy is not None:
                transition.degenerate_energy = energy
                transition.trace = trace
                transition.degenerate_class = classify_trace(trace, TRANSITION_TOL)
        transitions.append(transition)
    return transitions


def continue_family(
    system: SystemDef,
    seed: ShootResult,
    energy_range: Tuple[float, float],
    step: float,
    opts: Optional[ShootingOptions] = None,
    min_step: Optional[float] = None,
) -> Family:
    """
    Natural parameter continuation in energy from a converged seed.
    Members sit at energies low + k step inside the range, each classified,
    transitions are bisected down to a degenerate member.

    Arguments:
        system: SystemDef.
        seed: converged ShootResult.
        energy_range: tuple of end energies.
        step: positive energy step.
        opts: Optional ShootingOptions.
        min_step: Optional smallest step before stalling. Default step / 64.

    Returns:
        Family instance, ContinuationStalled carries the partial family.
    """

    opts = opts or ShootingOptions()
    min_step = min_step if min_step is not None else step / 64.0
    grid = _energy_grid(energy_range, step)
    LOG.info("Continuing family of '%s' over %i energies ...", system.name, len(grid))

    continuation = _Continuation(system, seed, opts, min_step)
    seed_energy = seed.orbit.energy
    results: Dict[float, ShootResult] = {}
    for energy in grid:
        if energy == seed_energy:
            results[energy] = seed

    family = Family(system.name)
    stalled: Optional[ContinuationStalled] = None
    try:
        continuation.march([e for e in grid if e > seed_energy], results)
        continuation.march([e for e in reversed(grid) if e < seed_energy], results)
    except ContinuationStalled as e:
        stalled = e
        family.stalled = True

    for energy in sorted(results):
        report = _report(system, results[energy], opts)
        family.members.append((energy, results[energy], report))
        if report.doubly_symmetric and report.classification is OrbitClass.NEGATIVE_HYPERBOLIC:
            LOG.warning("Doubly symmetric member at energy %r is negative hyperbolic.", energy)
            family.violations.append(energy)

    family.transitions = family_transitions(family.members, system, continuation, opts)

    LOG.info("Done!")
    if stalled is not None:
        raise ContinuationStalled(str(stalled), partial=family) from stalled
    return family

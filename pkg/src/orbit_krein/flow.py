#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""

Module containing the numerical integration of Hamiltonian flows,
their variational equations and section crossing detection.

Integration uses scipy's adaptive DOP853 scheme with dense output.
Variational equations are integrated together with the state as one
20 dimensional system (state followed by the row-major 4x4 frame D(t)).

exports:
    IntegrationOptions: integration tolerances.
    IntegrationStats, Trajectory: integration results.
    EventSpec: section crossing description.
    integrate, integrate_variational, integrate_to_event, flow_map, coordinate_event.

Authors: orbit_krein developers.

"""

import logging

from dataclasses import dataclass, field, asdict
from typing import Callable, Optional, Tuple, List, Any

import numpy as np

from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from orbit_krein.systems import SystemDef, OMEGA
from orbit_krein.helper_functions import as_state, sup_norm
from orbit_krein.errors import DomainExit, StepFailure, EventNotFound


LOG = logging.getLogger(__name__)

# Subdivisions of every accepted step scanned for sign changes
_EVENT_SUBDIVISIONS = 4

# Maximum time corrections after refinement on dense output
_EVENT_POLISH_ITERATIONS = 4


@dataclass
class IntegrationOptions:
    """
    Integration tolerances.

    Attributes:
        rtol, atol: step error tolerances.
        method: solve_ivp method name.
        energy_tol: relative energy drift above which a warning is logged.
        sympl_tol: symplecticity drift above which a warning is logged.
        event_chunk: time span integrated per event scanning chunk.
        max_step: optional maximum step size.
    """

    rtol: float = 1e-12
    atol: float = 1e-12
    method: str = "DOP853"
    energy_tol: float = 1e-10
    sympl_tol: float = 1e-8
    event_chunk: float = 5.0
    max_step: float = np.inf


@dataclass
class IntegrationStats:
    """Integrator counters and measured drifts."""

    steps: int = 0
    nfev: int = 0
    max_energy_drift: float = 0.0
    max_sympl_drift: float = 0.0

    def merge(self, other: "IntegrationStats") -> None:
        self.steps += other.steps
        self.nfev += other.nfev
        self.max_energy_drift = max(self.max_energy_drift, other.max_energy_drift)
        self.max_sympl_drift = max(self.max_sympl_drift, other.max_sympl_drift)


@dataclass
class Trajectory:
    """
    Sampled solution of the Hamiltonian flow.

    Attributes:
        system: system name.
        times: monotone sample times, starting at 0.
        states: array of shape (N, 4).
        frames: Optional array of shape (N, 4, 4) holding D(t).
        stats: IntegrationStats.
        dense: Optional callable t -> state (or state and frame) from dense output.
    """

    system: str
    times: np.ndarray
    states: np.ndarray
    frames: Optional[np.ndarray] = None
    stats: IntegrationStats = field(default_factory=IntegrationStats)
    dense: Optional[Callable[[Any], np.ndarray]] = field(default=None, repr=False, compare=False)

    @property
    def start(self) -> np.ndarray:
        return self.states[0]

    @property
    def end(self) -> np.ndarray:
        return self.states[-1]

    @property
    def duration(self) -> float:
        return float(self.times[-1] - self.times[0])

    @property
    def final_frame(self) -> np.ndarray:
        """D at the last sample."""
        if self.frames is None:
            raise ValueError("Trajectory carries no tangent frames.")
        return self.frames[-1]

    def resample(self, count: int) -> "Trajectory":
        """
        Uniformly resamples the trajectory on its dense output.

        Arguments:
            count: number of samples, both ends included.

        Returns:
            new Trajectory sharing stats and dense output.
        """

        if self.dense is None:
            raise ValueError("Trajectory carries no dense output.")
        if count < 2:
            raise ValueError("Resampling needs at least two samples.")
        times = np.linspace(self.times[0], self.times[-1], count)
        values = np.atleast_2d(self.dense(times)).T
        states = values[:, :4].copy()
        frames = values[:, 4:].reshape(-1, 4, 4).copy() if values.shape[1] == 20 else None
        # Keep the integrated end points
        states[0], states[-1] = self.states[0], self.states[-1]
        if frames is not None and self.frames is not None:
            frames[0], frames[-1] = self.frames[0], self.frames[-1]
        return Trajectory(self.system, times, states, frames, self.stats, self.dense)

    def to_rows(self) -> List[List[float]]:
        """Rows (t, q1, q2, p1, p2)."""
        return [[float(t)] + [float(v) for v in s] for t, s in zip(self.times, self.states)]

    def to_dict(self) -> dict:
        """JSON serializable representation without frames."""
        return {
            "system": self.system,
            "coordinates": "base",
            "columns": ["t", "q1", "q2", "p1", "p2"],
            "rows": self.to_rows(),
            "stats": asdict(self.stats),
        }


@dataclass
class EventSpec:
    """
    Section crossing description.

    Attributes:
        g: scalar event function of a phase space point.
        direction: +1 increasing, -1 decreasing, 0 any crossing.
        occurrence: one based index of the requested crossing.
        tol: accepted |g| at the refined crossing.
    """

    g: Callable[[np.ndarray], float]
    direction: int = 0
    occurrence: int = 1
    tol: float = 1e-11

    def __post_init__(self) -> None:
        if self.direction not in (-1, 0, 1):
            LOG.debug("event direction %r", self.direction)
            raise ValueError("Event direction must be -1, 0 or 1.")
        if self.occurrence < 1:
            LOG.debug("event occurrence %r", self.occurrence)
            raise ValueError("Event occurrence index starts at 1.")

    def accepts(self, g_before: float, g_after: float) -> bool:
        """True if the sign change between two samples matches the direction."""
        if g_before * g_after >= 0.0:
            return False
        if self.direction == 0:
            return True
        return (g_after > g_before) == (self.direction > 0)


def coordinate_event(index: int, direction: int = 0, occurrence: int = 1, tol: float = 1e-11) -> EventSpec:
    """Event on the zero set of one phase space coordinate."""
    return EventSpec(lambda x: float(x[index]), direction, occurrence, tol)


def _state_rhs(system: SystemDef) -> Callable:
    def rhs(_, y: np.ndarray) -> np.ndarray:
        if not system.in_domain(y):
            LOG.debug("state %s", str(y))
            raise DomainExit("Trajectory left the domain of the Hamiltonian.")
        return system.vector_field(y)

    return rhs


def _variational_rhs(system: SystemDef) -> Callable:
    def rhs(_, y: np.ndarray) -> np.ndarray:
        x = y[:4]
        if not system.in_domain(x):
            LOG.debug("state %s", str(x))
            raise DomainExit("Trajectory left the domain of the Hamiltonian.")
        d = y[4:].reshape(4, 4)
        return np.concatenate((system.vector_field(x), (system.variational_matrix(x) @ d).ravel()))

    return rhs


def _solve(rhs: Callable, y0: np.ndarray, t0: float, t1: float, opts: IntegrationOptions, dense: bool):
    # Single solve_ivp call with error translation
    solution = solve_ivp(
        rhs,
        (t0, t1),
        y0,
        method=opts.method,
        rtol=opts.rtol,
        atol=opts.atol,
        dense_output=dense,
        max_step=opts.max_step,
    )
    if solution.status < 0:
        LOG.debug("solve_ivp message '%s' at t = %r", solution.message, solution.t[-1])
        raise StepFailure("Integration step failed.")
    return solution


def _measure(system: SystemDef, states: np.ndarray, frames: Optional[np.ndarray], opts: IntegrationOptions):
    # Energy and symplecticity drift along samples
    energies = np.array([system.H(s) for s in states])
    drift = sup_norm(energies - energies[0]) / max(1.0, abs(energies[0]))
    if drift > opts.energy_tol:
        LOG.warning("Energy drift %.3e above bound %.1e for system '%s'.", drift, opts.energy_tol, system.name)
    sympl = 0.0
    if frames is not None:
        sympl = max(sup_norm(d.T @ OMEGA @ d - OMEGA) for d in frames)
        if sympl > opts.sympl_tol:
            LOG.warning("Symplecticity drift %.3e above bound %.1e for system '%s'.", sympl, opts.sympl_tol, system.name)
    return drift, sympl


def _check_start(system: SystemDef, x0: np.ndarray) -> np.ndarray:
    state = as_state(x0)
    if not system.in_domain(state):
        LOG.debug("initial state %s", str(state))
        raise DomainExit("Initial state outside the domain of the Hamiltonian.")
    return state


def integrate(
    system: SystemDef, x0: np.ndarray, t_end: float, opts: Optional[IntegrationOptions] = None
) -> Trajectory:
    """
    Integrates the Hamiltonian flow. Negative t_end integrates backwards.

    Arguments:
        system: SystemDef.
        x0: initial phase space point.
        t_end: final time.
        opts: Optional IntegrationOptions.

    Returns:
        Trajectory with dense output.
    """

    opts = opts or IntegrationOptions()
    state = _check_start(system, x0)

    if t_end == 0.0:
        return Trajectory(system.name, np.array([0.0]), state.reshape(1, 4))

    solution = _solve(_state_rhs(system), state, 0.0, float(t_end), opts, dense=True)
    states = solution.y.T.copy()
    drift, _ = _measure(system, states, None, opts)
    stats = IntegrationStats(len(solution.t) - 1, int(solution.nfev), drift, 0.0)
    return Trajectory(system.name, solution.t.copy(), states, None, stats, solution.sol)


def integrate_variational(
    system: SystemDef, x0: np.ndarray, t_end: float, opts: Optional[IntegrationOptions] = None
) -> Trajectory:
    """
    Integrates the flow together with its linearization D' = DX_H(x) D, D(0) = I.

    Arguments:
        system: SystemDef.
        x0: initial phase space point.
        t_end: final time.
        opts: Optional IntegrationOptions.

    Returns:
        Trajectory with tangent frames and dense output.
    """

    opts = opts or IntegrationOptions()
    state = _check_start(system, x0)

    if t_end == 0.0:
        return Trajectory(system.name, np.array([0.0]), state.reshape(1, 4), np.eye(4).reshape(1, 4, 4))

    y0 = np.concatenate((state, np.eye(4).ravel()))
    solution = _solve(_variational_rhs(system), y0, 0.0, float(t_end), opts, dense=True)
    states = solution.y[:4].T.copy()
    frames = solution.y[4:].T.reshape(-1, 4, 4).copy()
    drift, sympl = _measure(system, states, frames, opts)
    stats = IntegrationStats(len(solution.t) - 1, int(solution.nfev), drift, sympl)
    return Trajectory(system.name, solution.t.copy(), states, frames, stats, solution.sol)


def flow_map(system: SystemDef, x0: np.ndarray, t: float, opts: Optional[IntegrationOptions] = None) -> np.ndarray:
    """Time t flow of x0, without dense output."""
    opts = opts or IntegrationOptions()
    state = _check_start(system, x0)
    if t == 0.0:
        return state
    return _solve(_state_rhs(system), state, 0.0, float(t), opts, dense=False).y[:, -1].copy()


def _joined_dense(earlier: Callable, solution) -> Callable:
    # Dense output of the current chunk, extended backwards by the chunk holding the bracket start
    if earlier is solution.sol:
        return earlier
    start = float(solution.t[0])

    def dense(t: float) -> np.ndarray:
        return solution.sol(t) if t >= start else earlier(t)

    return dense


def _refine_event(
    system: SystemDef,
    event: EventSpec,
    dense: Callable,
    node: Tuple[float, np.ndarray],
    bracket: Tuple[float, float],
    opts: IntegrationOptions,
) -> Tuple[float, np.ndarray]:
    # Root of g on dense output, then honest re-integration from the last accepted node
    # with Newton corrections in time using the finite difference of g along X_H.
    t_node, x_node = node
    try:
        t_star = brentq(lambda t: event.g(dense(t)), bracket[0], bracket[1], xtol=1e-15, rtol=4 * np.finfo(float).eps)
    except ValueError as e:
        LOG.debug("event bracket %s", str(bracket))
        raise EventNotFound("Event sign change lost on dense output.") from e

    x_star = flow_map(system, x_node, t_star - t_node, opts) if t_star != t_node else x_node.copy()
    for _ in range(_EVENT_POLISH_ITERATIONS):
        residual = event.g(x_star)
        if abs(residual) <= event.tol * 1e-2:
            break
        velocity = system.vector_field(x_star)
        h = 1e-7 / max(1.0, sup_norm(velocity))
        slope = (event.g(x_star + h * velocity) - event.g(x_star - h * velocity)) / (2.0 * h)
        if slope == 0.0:
            break
        t_star -= residual / slope
        x_star = flow_map(system, x_node, t_star - t_node, opts)

    if abs(event.g(x_star)) > event.tol:
        LOG.debug("event residual %r at t = %r , tol %r", event.g(x_star), t_star, event.tol)
        raise EventNotFound("Event refinement did not reach requested tolerance.")
    return t_star, x_star


def integrate_to_event(
    system: SystemDef,
    x0: np.ndarray,
    event: EventSpec,
    t_max: float,
    opts: Optional[IntegrationOptions] = None,
) -> Tuple[float, np.ndarray, Trajectory]:
    """
    Integrates until the requested crossing of the event function.
    A start on the section (|g| <= tol) is not counted as a crossing.

    Arguments:
        system: SystemDef.
        x0: initial phase space point.
        event: EventSpec.
        t_max: positive search horizon.
        opts: Optional IntegrationOptions.

    Returns:
        tuple of crossing time, crossing state and the trajectory up to the crossing.
    """

    opts = opts or IntegrationOptions()
    state = _check_start(system, x0)
    if t_max <= 0.0:
        LOG.debug("t_max %r", t_max)
        raise ValueError("Event search horizon must be positive.")

    rhs = _state_rhs(system)
    stats = IntegrationStats()
    times: List[float] = [0.0]
    states: List[np.ndarray] = [state]
    found = 0
    # last sample with |g| > tol and the dense output covering it
    previous: Optional[Tuple[float, float, Callable]] = None
    g_seen = abs(event.g(state)) > event.tol
    t0 = 0.0

    while t0 < t_max:
        t1 = min(t0 + opts.event_chunk, t_max)
        solution = _solve(rhs, states[-1], t0, t1, opts, dense=True)
        stats.merge(IntegrationStats(len(solution.t) - 1, int(solution.nfev)))

        for k in range(len(solution.t) - 1):
            ta, tb = solution.t[k], solution.t[k + 1]
            for tau in np.linspace(ta, tb, _EVENT_SUBDIVISIONS + 1)[1:]:
                value = event.g(solution.sol(tau))
                if abs(value) <= event.tol:
                    continue
                g_seen = True
                if previous is not None and event.accepts(previous[1], value):
                    found += 1
                    if found == event.occurrence:
                        dense = _joined_dense(previous[2], solution)
                        t_star, x_star = _refine_event(
                            system, event, dense, (ta, solution.y[:, k]), (previous[0], tau), opts
                        )
                        while len(times) > 1 and times[-1] >= t_star:
                            times.pop()
                            states.pop()
                        times.append(t_star)
                        states.append(x_star)
                        trajectory_states = np.array(states)
                        drift, _ = _measure(system, trajectory_states, None, opts)
                        stats.max_energy_drift = drift
                        return t_star, x_star, Trajectory(system.name, np.array(times), trajectory_states, None, stats)
                previous = (tau, value, solution.sol)
            times.append(float(tb))
            states.append(solution.y[:, k + 1].copy())

        if not g_seen:
            LOG.debug("event function vanishes on [0, %r]", t1)
            raise EventNotFound("Event function is identically zero along the trajectory.")
        t0 = t1

    LOG.debug("found %i of %i crossings before t_max = %r", found, event.occurrence, t_max)
    raise EventNotFound("Requested crossing not found before time limit.")

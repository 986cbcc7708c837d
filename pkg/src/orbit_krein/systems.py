#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""

Module containing the concrete two degree of freedom Hamiltonian systems
together with their antisymplectic involutions.

Phase space points are numpy arrays (q1, q2, p1, p2).
The symplectic form is omega(u, v) = u^T OMEGA v with OMEGA = [[0, -I], [I, 0]],
so that dH = omega(., X_H) and X_H = OMEGA^-1 grad H = (dH/dp, -dH/dq).

All involutions are coordinate sign flips. Fixed coordinates of an involution
give the chart of its fixed set (first: chart coordinate, second: coordinate solved from
the energy), anti-invariant coordinates give the shooting section
(first: event coordinate, second: perpendicularity residual).

exports:
    OMEGA, OMEGA_INV: standard symplectic matrices.
    Involution, SystemDef: descriptor classes.
    hill_system, langmuir_system: system factories.
    SYSTEMS, register_system, get_system: system registry.
    critical_values, state_on_fixed_set, omega.

Authors: orbit_krein developers.

"""

import logging

from dataclasses import dataclass
from typing import Callable, Tuple, List, Sequence, Union, Optional

import numpy as np

from scipy.optimize import brentq, root

from orbit_krein.errors import EnergyUnreachable, ConfigError, DomainExit
from orbit_krein.helper_functions import as_state, parse_branch


LOG = logging.getLogger(__name__)

OMEGA = np.block([[np.zeros((2, 2)), -np.eye(2)], [np.eye(2), np.zeros((2, 2))]])
OMEGA_INV = -OMEGA

# Collision guard of the domain predicates
DOMAIN_GUARD = 1e-10


def omega(u: np.ndarray, v: np.ndarray) -> float:
    """Standard symplectic pairing u^T OMEGA v."""
    return float(u @ OMEGA @ v)


@dataclass(frozen=True)
class Involution:
    """
    Linear antisymplectic involution acting by coordinate sign flips.

    Attributes:
        name: identifier, e.g. "rho1".
        signs: diagonal of the involution matrix, two +1 and two -1 entries.
    """

    name: str
    signs: Tuple[int, int, int, int]

    def __post_init__(self) -> None:
        if sorted(self.signs) != [-1, -1, 1, 1]:
            LOG.debug("involution '%s' signs %s", self.name, str(self.signs))
            raise ValueError("Involution needs two fixed and two anti-invariant coordinates.")

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(self.signs, dtype=float) * x

    @property
    def matrix(self) -> np.ndarray:
        """Jacobian of the involution."""
        return np.diag(np.asarray(self.signs, dtype=float))

    @property
    def fixed_indices(self) -> Tuple[int, int]:
        return tuple(i for i, s in enumerate(self.signs) if s > 0)

    @property
    def anti_indices(self) -> Tuple[int, int]:
        return tuple(i for i, s in enumerate(self.signs) if s < 0)

    @property
    def chart_index(self) -> int:
        """Coordinate parameterizing the fixed set at fixed energy."""
        return self.fixed_indices[0]

    @property
    def solve_index(self) -> int:
        """Coordinate of the fixed set solved from the energy."""
        return self.fixed_indices[1]

    @property
    def event_index(self) -> int:
        """Coordinate whose zero defines the shooting section."""
        return self.anti_indices[0]

    @property
    def residual_index(self) -> int:
        """Coordinate which must vanish at a perpendicular crossing."""
        return self.anti_indices[1]

    def is_fixed(self, x: np.ndarray, tol: float = 0.0) -> bool:
        """True if all anti-invariant coordinates are within tol of zero."""
        return bool(np.all(np.abs(np.asarray(x)[list(self.anti_indices)]) <= tol))

    def project(self, x: np.ndarray) -> np.ndarray:
        """Projection (x + rho x) / 2 onto the fixed set."""
        return 0.5 * (x + self(x))

    def residual(self, x: np.ndarray) -> float:
        """Distance of x to the fixed set in the sup norm."""
        return float(np.max(np.abs(np.asarray(x)[list(self.anti_indices)])))

    def compose(self, other: "Involution", name: Optional[str] = None) -> "SignMap":
        """Composition of two sign flips."""
        signs = tuple(int(a * b) for a, b in zip(self.signs, other.signs))
        return SignMap(name or f"{self.name}*{other.name}", signs)


@dataclass(frozen=True)
class SignMap:
    """Linear map acting by coordinate sign flips, used for symplectic compositions."""

    name: str
    signs: Tuple[int, int, int, int]

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(self.signs, dtype=float) * x

    @property
    def matrix(self) -> np.ndarray:
        return np.diag(np.asarray(self.signs, dtype=float))


@dataclass(frozen=True)
class SystemDef:
    """
    Hamiltonian system descriptor.

    Attributes:
        name: registry identifier.
        hamiltonian: energy function of a phase space point.
        gradient: gradient of the energy function.
        hessian: Hessian of the energy function.
        involutions: one or two antisymplectic involutions.
        in_domain: predicate excluding the collision set.
        fixed_set_solver: callable (inv_index, coord, energy, branch) -> solved coordinate,
                          raises EnergyUnreachable.
        description: human readable description.
    """

    name: str
    hamiltonian: Callable[[np.ndarray], float]
    gradient: Callable[[np.ndarray], np.ndarray]
    hessian: Callable[[np.ndarray], np.ndarray]
    involutions: Tuple[Involution, ...]
    in_domain: Callable[[np.ndarray], bool]
    fixed_set_solver: Callable[[int, float, float, int], float]
    description: str = ""

    def H(self, x: np.ndarray) -> float:
        """Energy."""
        return float(self.hamiltonian(x))

    def grad_H(self, x: np.ndarray) -> np.ndarray:
        return self.gradient(x)

    def hessian_H(self, x: np.ndarray) -> np.ndarray:
        return self.hessian(x)

    def vector_field(self, x: np.ndarray) -> np.ndarray:
        """Hamiltonian vector field X_H = OMEGA^-1 grad H."""
        return OMEGA_INV @ self.gradient(x)

    def variational_matrix(self, x: np.ndarray) -> np.ndarray:
        """Linearization DX_H = OMEGA^-1 Hess H."""
        return OMEGA_INV @ self.hessian(x)

    def involution(self, index: int) -> Involution:
        """Involution by one based index."""
        if index < 1 or index > len(self.involutions):
            LOG.debug("system '%s' , involution index %r", self.name, index)
            raise ConfigError("Involution index out of range for system.")
        return self.involutions[index - 1]

    @property
    def is_doubly_real(self) -> bool:
        """True when two commuting involutions are available."""
        return len(self.involutions) == 2

    def symplectic_involution(self) -> SignMap:
        """sigma = rho1 rho2, a symplectic involution for doubly real systems."""
        if not self.is_doubly_real:
            LOG.debug("system '%s' with %i involutions", self.name, len(self.involutions))
            raise ValueError("System has a single involution.")
        return self.involutions[0].compose(self.involutions[1], "sigma")


# Hill's lunar problem


def _hill_H(x: np.ndarray) -> float:
    q1, q2, p1, p2 = x
    return 0.5 * ((p1 + q2) ** 2 + (p2 - q1) ** 2) - 1.0 / np.hypot(q1, q2) - 1.5 * q1 * q1


def _hill_grad(x: np.ndarray) -> np.ndarray:
    q1, q2, p1, p2 = x
    r3 = np.hypot(q1, q2) ** 3
    return np.array(
        [
            -(p2 - q1) + q1 / r3 - 3.0 * q1,
            (p1 + q2) + q2 / r3,
            p1 + q2,
            p2 - q1,
        ]
    )


def _hill_hessian(x: np.ndarray) -> np.ndarray:
    q1, q2, _, _ = x
    r = np.hypot(q1, q2)
    r3 = r**3
    r5 = r**5
    return np.array(
        [
            [1.0 + 1.0 / r3 - 3.0 * q1 * q1 / r5 - 3.0, -3.0 * q1 * q2 / r5, 0.0, -1.0],
            [-3.0 * q1 * q2 / r5, 1.0 + 1.0 / r3 - 3.0 * q2 * q2 / r5, 1.0, 0.0],
            [0.0, 1.0, 1.0, 0.0],
            [-1.0, 0.0, 0.0, 1.0],
        ]
    )


def _hill_in_domain(x: np.ndarray) -> bool:
    return bool(np.hypot(x[0], x[1]) >= DOMAIN_GUARD)


def _hill_fixed_set_solver(inv_index: int, coord: float, energy: float, branch: int) -> float:
    # rho1: q2 = p1 = 0, chart q1, solve p2 from (p2 - q1)^2 / 2 = E + 1/|q1| + 3/2 q1^2
    # rho2: q1 = p2 = 0, chart q2, solve p1 from (p1 + q2)^2 / 2 = E + 1/|q2|
    if abs(coord) < DOMAIN_GUARD:
        LOG.debug("Hill chart coordinate %r", coord)
        raise EnergyUnreachable("Chart coordinate at the collision point.")
    if inv_index == 1:
        radicand = 2.0 * (energy + 1.0 / abs(coord) + 1.5 * coord * coord)
        shift = coord
    else:
        radicand = 2.0 * (energy + 1.0 / abs(coord))
        shift = -coord
    if radicand < 0.0:
        LOG.debug("Hill involution %i , coordinate %r , energy %r , radicand %r", inv_index, coord, energy, radicand)
        raise EnergyUnreachable("Point outside the Hill region.")
    return shift + branch * np.sqrt(radicand)


def hill_system() -> SystemDef:
    """
    Hill's lunar Hamiltonian
        H = ((p1 + q2)^2 + (p2 - q1)^2) / 2 - 1/|q| - 3/2 q1^2
    with rho1 (q1, -q2, -p1, p2) and rho2 (-q1, q2, p1, -p2).
    Fix(rho1) is the conormal of the x-axis, Fix(rho2) of the y-axis.
    """

    return SystemDef(
        name="hill",
        hamiltonian=_hill_H,
        gradient=_hill_grad,
        hessian=_hill_hessian,
        involutions=(Involution("rho1", (1, -1, -1, 1)), Involution("rho2", (-1, 1, 1, -1))),
        in_domain=_hill_in_domain,
        fixed_set_solver=_hill_fixed_set_solver,
        description="Hill's lunar problem",
    )


# Langmuir Hamiltonian


def _langmuir_H(x: np.ndarray) -> float:
    q1, q2, p1, p2 = x
    return p1 * p1 + p2 * p2 - 4.0 / np.hypot(q1, q2) + 1.0 / (2.0 * q2)


def _langmuir_grad(x: np.ndarray) -> np.ndarray:
    q1, q2, p1, p2 = x
    r3 = np.hypot(q1, q2) ** 3
    return np.array(
        [
            4.0 * q1 / r3,
            4.0 * q2 / r3 - 1.0 / (2.0 * q2 * q2),
            2.0 * p1,
            2.0 * p2,
        ]
    )


def _langmuir_hessian(x: np.ndarray) -> np.ndarray:
    q1, q2, _, _ = x
    r = np.hypot(q1, q2)
    r3 = r**3
    r5 = r**5
    hess = np.zeros((4, 4))
    hess[0, 0] = 4.0 / r3 - 12.0 * q1 * q1 / r5
    hess[0, 1] = hess[1, 0] = -12.0 * q1 * q2 / r5
    hess[1, 1] = 4.0 / r3 - 12.0 * q2 * q2 / r5 + 1.0 / q2**3
    hess[2, 2] = hess[3, 3] = 2.0
    return hess


def _langmuir_in_domain(x: np.ndarray) -> bool:
    return bool(x[1] >= DOMAIN_GUARD)


def _langmuir_brake_height(q1: float, energy: float, branch: int) -> float:
    # Solves -4/|q| + 1/(2 q2) = energy for q2 > 0 at fixed q1.
    # On the imaginary axis the potential is -7/(2 q2), a single root.
    if abs(q1) < DOMAIN_GUARD:
        if energy >= 0.0:
            LOG.debug("Langmuir brake on imaginary axis , energy %r", energy)
            raise EnergyUnreachable("No brake point at non negative energy on the imaginary axis.")
        return 3.5 / -energy

    def f(q2: float) -> float:
        return -4.0 / np.hypot(q1, q2) + 1.0 / (2.0 * q2) - energy

    def df(q2: float) -> float:
        return 4.0 * q2 / np.hypot(q1, q2) ** 3 - 1.0 / (2.0 * q2 * q2)

    # df < 0 near zero, df > 0 for large q2: unique minimum of f
    low = abs(q1) * 1e-6
    high = abs(q1)
    while df(high) <= 0.0:
        high *= 2.0
    q_min = brentq(df, low, high, xtol=1e-15, rtol=1e-15)
    if f(q_min) > 0.0:
        LOG.debug("Langmuir brake q1 %r , energy %r , min potential gap %r", q1, energy, f(q_min))
        raise EnergyUnreachable("Energy below the potential minimum along this vertical line.")

    if branch < 0:
        inner = q_min
        while f(inner) <= 0.0:
            inner *= 0.5
        return brentq(f, inner, q_min, xtol=1e-15, rtol=1e-15)

    if energy >= 0.0:
        LOG.debug("Langmuir brake q1 %r , energy %r", q1, energy)
        raise EnergyUnreachable("No outer brake point at non negative energy.")
    outer = 2.0 * q_min
    while f(outer) <= 0.0:
        outer *= 2.0
    return brentq(f, q_min, outer, xtol=1e-15, rtol=1e-15)


def _langmuir_fixed_set_solver(inv_index: int, coord: float, energy: float, branch: int) -> float:
    # rho1: q1 = p2 = 0, chart q2, solve p1 from p1^2 = E + 7/(2 q2)
    # rho2: p1 = p2 = 0, chart q1, solve q2 from the potential
    if inv_index == 1:
        if coord < DOMAIN_GUARD:
            LOG.debug("Langmuir chart coordinate q2 = %r", coord)
            raise EnergyUnreachable("Chart coordinate outside the upper half plane.")
        radicand = energy + 3.5 / coord
        if radicand < 0.0:
            LOG.debug("Langmuir q2 %r , energy %r , radicand %r", coord, energy, radicand)
            raise EnergyUnreachable("Point outside the Hill region.")
        return branch * np.sqrt(radicand)
    return _langmuir_brake_height(coord, energy, branch)


def langmuir_system() -> SystemDef:
    """
    Langmuir Hamiltonian H = |p|^2 - 4/|q| + 1/(2 q2) on the upper half plane,
    with rho1 (q, p) -> (-conj q, conj p) and rho2 (q, p) -> (q, -p).
    Fix(rho2) consists of brake points.
    """

    return SystemDef(
        name="langmuir",
        hamiltonian=_langmuir_H,
        gradient=_langmuir_grad,
        hessian=_langmuir_hessian,
        involutions=(Involution("rho1", (-1, 1, 1, -1)), Involution("rho2", (1, 1, -1, -1))),
        in_domain=_langmuir_in_domain,
        fixed_set_solver=_langmuir_fixed_set_solver,
        description="Langmuir Hamiltonian",
    )


SYSTEMS = {
    "hill": hill_system,
    "langmuir": langmuir_system,
}


def register_system(name: str, factory: Callable[[], SystemDef]) -> None:
    """
    Function to register new systems in the SYSTEMS dictionary.

    Arguments:
        name: string name of the system.
        factory: callable without arguments returning a SystemDef.
    """

    if name in SYSTEMS:
        raise KeyError("System already exists")

    SYSTEMS[name] = factory


def get_system(name: str) -> SystemDef:
    """Builds registered system by name."""
    key = name.strip().lower()
    if key not in SYSTEMS:
        LOG.debug("system '%s' , known %s", name, str(sorted(SYSTEMS)))
        raise ConfigError("Unknown system.")
    return SYSTEMS[key]()


def state_on_fixed_set(
    system: SystemDef, inv_index: int, coord: float, energy: float, branch: Union[int, str] = 1
) -> np.ndarray:
    """
    Builds a point of Fix(rho_i) at the given energy.
    The chart coordinate is set to coord, the solved coordinate is computed
    in closed form (or by bracketing) and polished by one Newton step.

    Arguments:
        system: SystemDef.
        inv_index: one based involution index.
        coord: value of the chart coordinate.
        energy: target energy.
        branch: root selection, +1/-1 or branch word.

    Returns:
        phase space point on the fixed set.
    """

    involution = system.involution(inv_index)
    sign = parse_branch(branch)

    state = np.zeros(4)
    state[involution.chart_index] = coord
    state[involution.solve_index] = system.fixed_set_solver(inv_index, float(coord), float(energy), sign)
    if not system.in_domain(state):
        LOG.debug("state %s", str(state))
        raise EnergyUnreachable("Fixed set point outside the domain.")

    # Newton polish along the solved coordinate
    slope = system.grad_H(state)[involution.solve_index]
    if abs(slope) > 1e-12:
        state[involution.solve_index] -= (system.H(state) - energy) / slope

    return state


def critical_values(
    system: SystemDef, seeds: Sequence[Sequence[float]], tol: float = 1e-10
) -> List[Tuple[np.ndarray, float]]:
    """
    Newton refined zeros of the energy gradient.
    Seeds that do not converge inside the domain are skipped with a warning.

    Arguments:
        system: SystemDef.
        seeds: initial guesses.
        tol: gradient norm accepted at a zero, also used for deduplication.

    Returns:
        list of tuples of critical point and critical value.
    """

    found = []

    def guarded_gradient(x: np.ndarray) -> np.ndarray:
        if not system.in_domain(x):
            raise DomainExit("Newton iterate left the domain.")
        return system.grad_H(x)

    for seed in seeds:
        x0 = as_state(seed)
        if not system.in_domain(x0):
            LOG.warning("Seed %s outside domain of '%s', skipping.", str(x0), system.name)
            continue
        try:
            with np.errstate(all="ignore"):
                solution = root(guarded_gradient, x0, jac=system.hessian_H, method="hybr", tol=tol * 1e-2)
        except DomainExit:
            LOG.warning("Newton iterate from seed %s left the domain, skipping.", str(x0))
            continue
        point = solution.x
        if not solution.success or not system.in_domain(point) or np.max(np.abs(system.grad_H(point))) > tol:
            LOG.warning("No convergence from seed %s, skipping.", str(x0))
            continue
        if any(np.max(np.abs(point - other)) <= max(tol, 1e-8) for other, _ in found):
            continue
        found.append((point, system.H(point)))

    return found

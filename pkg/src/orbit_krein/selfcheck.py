#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""

Invariant suite run by the selfcheck command.

Each check returns a CheckResult, numerical failures inside a check
are reported as FAIL instead of being raised.

exports:
    CheckResult class
    CHECKS: ordered dictionary of check name to function.
    run_selfcheck: runs a selection of checks.

Authors: orbit_krein developers.

"""

import logging

from time import perf_counter
from itertools import product
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional

import numpy as np

from orbit_krein.errors import OrbitKreinError
from orbit_krein.real_sl2 import (
    RealSL2,
    RealCouple,
    OrbitClass,
    classify,
    couple_from_A,
    couple_products,
    signs_differ_iff_negative,
)
from orbit_krein.systems import hill_system, critical_values
from orbit_krein.shooting import shoot_doubly_symmetric, quarter_shift
from orbit_krein.monodromy import symmetric_orbit_report
from orbit_krein.levi_civita import LCPoint, lc_involution_check, lc_lift_orbit


LOG = logging.getLogger(__name__)

HILL_CRITICAL_VALUE = -(3.0 ** (4.0 / 3.0)) / 2.0


@dataclass
class CheckResult:
    """Outcome of a single check."""

    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail} ({self.seconds:.2f} s)"


def check_integer_sweep(bound: int = 5) -> CheckResult:
    """Differing B-signs against negative hyperbolicity over all integer matrices with entries in [-bound, bound]."""
    checked, failures = 0, []
    for a, b, c, d in product(range(-bound, bound + 1), repeat=4):
        if a * d - b * c != 1:
            continue
        couple = couple_from_A(RealSL2(float(a), float(b), float(c), float(d)))
        ab, _ = couple_products(couple)
        if abs(abs(ab.trace) - 2.0) <= 1e-9:
            continue
        differ, negative = signs_differ_iff_negative(couple)
        checked += 1
        if differ != negative:
            failures.append([a, b, c, d])
    if failures:
        LOG.debug("failing matrices %s", str(failures[:10]))
    return CheckResult("integer-sweep", not failures, f"{checked} couples, {len(failures)} mismatches")


def check_symmetric_couples(count: int = 10000, seed: int = 0) -> CheckResult:
    """Random symmetric couples (A, A) with A in SL^R never have negative hyperbolic products."""
    rng = np.random.default_rng(seed)
    negatives = 0
    for a, b in rng.uniform(-5.0, 5.0, size=(count, 2)):
        if abs(b) < 1e-6:
            continue
        m = RealSL2(a, b, (a * a - 1.0) / b, a)
        ab, _ = couple_products(RealCouple(m, m))
        if classify(ab) is OrbitClass.NEGATIVE_HYPERBOLIC:
            negatives += 1
    return CheckResult("symmetric-couples", negatives == 0, f"{count} couples, {negatives} negative hyperbolic")


def check_lc_identities(count: int = 1000, seed: int = 0) -> CheckResult:
    """Intertwining of the regularized involutions with the base involution on random points."""
    rng = np.random.default_rng(seed)
    z = rng.uniform(0.3, 2.0, count) * np.exp(1j * rng.uniform(-np.pi, np.pi, count))
    w = rng.normal(size=count) + 1j * rng.normal(size=count)
    check = lc_involution_check([LCPoint(complex(a), complex(b)) for a, b in zip(z, w)], 1e-13)
    residual = max(check.sigma1, check.sigma2, check.commute)
    return CheckResult("lc-identities", check.passed, f"max residual {residual:.3e}")


def check_hill_critical_value() -> CheckResult:
    """Critical value of the Hill Hamiltonian against its closed form."""
    found = critical_values(hill_system(), [[0.7, 0.0, 0.0, 0.7]])
    if not found:
        return CheckResult("hill-critical-value", False, "no critical point found")
    gap = abs(found[0][1] - HILL_CRITICAL_VALUE)
    return CheckResult("hill-critical-value", gap <= 1e-10, f"value {found[0][1]:.15g}, gap {gap:.3e}")


def check_hill_orbit(energy: float = -2.5, bracket=(0.05, 0.6)) -> CheckResult:
    """Retrograde Hill orbit: certificates, report invariants, quarter shift and regularized lift."""
    hill = hill_system()
    orbit = shoot_doubly_symmetric(hill, energy, bracket, "retro").orbit
    report = symmetric_orbit_report(hill, orbit)
    problems = list(report.structure_violations())
    if report.classification is OrbitClass.NEGATIVE_HYPERBOLIC:
        problems.append("negative hyperbolic")
    if report.residuals.get("sympl_drift", 0.0) > 1e-8:
        problems.append("symplecticity drift")
    if report.residuals.get("flow_invariance", 0.0) > 1e-7:
        problems.append("vector field not transported")
    shifted = quarter_shift(orbit, hill)
    if shifted.certificate.max_residual > 1e-7:
        problems.append("quarter shift certificate")
    curve = lc_lift_orbit(orbit, "+")
    if max(curve.residuals.values()) > 1e-8:
        problems.append("lift residuals")
    detail = f"{report.classification.value}, trace {report.trace:.6g}, period {orbit.period:.6g}"
    if problems:
        detail += "; " + ", ".join(problems)
    return CheckResult("hill-orbit", not problems, detail)


CHECKS: Dict[str, Callable[[], CheckResult]] = {
    "integer-sweep": check_integer_sweep,
    "symmetric-couples": check_symmetric_couples,
    "lc-identities": check_lc_identities,
    "hill-critical-value": check_hill_critical_value,
    "hill-orbit": check_hill_orbit,
}


def run_selfcheck(names: Optional[Iterable[str]] = None) -> List[CheckResult]:
    """
    Runs checks in CHECKS order.

    Arguments:
        names: Optional selection of check names. Default all.

    Returns:
        list of CheckResult.
    """

    selected = list(CHECKS) if names is None else list(names)
    unknown = [name for name in selected if name not in CHECKS]
    if unknown:
        raise KeyError(f"Unknown check(s): {', '.join(unknown)}")

    results = []
    for name in selected:
        LOG.info("Running check '%s' ...", name)
        start = perf_counter()
        try:
            result = CHECKS[name]()
        except OrbitKreinError as e:
            result = CheckResult(name, False, f"{type(e).__name__}: {e}")
        result.seconds = perf_counter() - start
        results.append(result)
    return results

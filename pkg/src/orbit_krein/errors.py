#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""

Module containing the error classes raised across the package.

Every error subclasses OrbitKreinError and the closest built-in exception,
so callers catching ValueError/RuntimeError keep working.
The exit_code attribute is used by the command line frontend:
    1 usage/parse, 2 math-domain, 3 not-found, 4 stalled, 5 topology.

exports:
    OrbitKreinError and all named subclasses.

Authors: orbit_krein developers.

"""

from typing import Any, Optional


class OrbitKreinError(Exception):
    """Base class of all package errors."""

    exit_code = 2


# Usage / parsing


class ConfigError(OrbitKreinError, ValueError):
    """Invalid, unknown or mistyped configuration entry."""

    exit_code = 1


class UsageError(OrbitKreinError, ValueError):
    """Malformed command line or unreadable input document."""

    exit_code = 1


# Math-domain


class DeterminantError(OrbitKreinError, ValueError):
    """Matrix determinant differs from one beyond tolerance."""


class NotSLRForm(OrbitKreinError, ValueError):
    """Matrix is not of the form [[a, b], [c, a]]."""


class DegenerateTrace(OrbitKreinError, ValueError):
    """Trace lies inside the degenerate band around +2 or -2."""


class CoupleError(OrbitKreinError, ValueError):
    """Pair of matrices violates R A R = B^-1."""


class EnergyUnreachable(OrbitKreinError, ValueError):
    """No real phase point on the fixed set has the requested energy."""


class DomainExit(OrbitKreinError, RuntimeError):
    """State left the domain of the Hamiltonian (collision set)."""


class StepFailure(OrbitKreinError, RuntimeError):
    """Integrator step size underflow."""


class TangencyError(OrbitKreinError, ValueError):
    """Reduced frame undefined at this point of the fixed set."""


class ZeroVectorField(OrbitKreinError, ValueError):
    """Hamiltonian vector field vanishes (equilibrium point)."""


class NotEnergyPreserving(OrbitKreinError, ValueError):
    """Linear map does not send the energy level tangent space into itself."""


class SymmetryViolated(OrbitKreinError, ValueError):
    """Symmetry certificate residual above tolerance."""


class OriginError(OrbitKreinError, ValueError):
    """Levi-Civita map evaluated at the origin."""


class BranchJump(OrbitKreinError, RuntimeError):
    """Square root branch tracking lost continuity."""


# Not found


class NoSignChange(OrbitKreinError, RuntimeError):
    """Shooting function has no usable sign change in the bracket."""

    exit_code = 3


class EventNotFound(OrbitKreinError, RuntimeError):
    """Requested section crossing not reached before the time limit."""

    exit_code = 3


class NoConvergence(OrbitKreinError, RuntimeError):
    """Iterative solver did not converge."""

    exit_code = 3


# Stalled


class ContinuationStalled(OrbitKreinError, RuntimeError):
    """Continuation step underflow. The partial family is attached."""

    exit_code = 4

    def __init__(self, message: str, partial: Optional[Any] = None) -> None:
        super().__init__(message)
        self.partial = partial


# Topology


class EvenWinding(OrbitKreinError, ValueError):
    """Base orbit winds an even number of times around the origin."""

    exit_code = 5

    def __init__(self, message: str, winding: Optional[int] = None) -> None:
        super().__init__(message)
        self.winding = winding

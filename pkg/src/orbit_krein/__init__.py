#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""

orbit_krein, stability of symmetric periodic orbits through real Krein signs.

Symmetric periodic orbits of planar Hamiltonian systems with antisymplectic
involutions are found by perpendicular shooting, their reduced monodromy is
split into a real couple whose B-signs decide negative hyperbolicity,
and families are continued in energy with Euler characteristic bookkeeping.
The Levi-Civita lift carries symmetric orbits of the Hill problem to
doubly symmetric closed curves in regularized coordinates.

See DEFAULT_CONFIG for configuration options and orbit_krein.cli for the command line.

Authors: orbit_krein developers.

"""

__version__ = "0.1.0"

__all__ = [
    "real_sl2",
    "systems",
    "flow",
    "monodromy",
    "shooting",
    "levi_civita",
    "config",
    "exporter",
]

from orbit_krein.real_sl2 import RealSL2, RealCouple, OrbitClass, KreinSign, classify, real_krein_sign
from orbit_krein.systems import get_system, register_system, hill_system, langmuir_system
from orbit_krein.flow import IntegrationOptions, integrate, integrate_variational, integrate_to_event
from orbit_krein.monodromy import MonodromyReport, symmetric_orbit_report, sft_euler_characteristic, euler_summary
from orbit_krein.shooting import ShootingOptions, Orbit, shoot_doubly_symmetric, shoot_symmetric, continue_family
from orbit_krein.levi_civita import lc_lift_orbit
from orbit_krein.config import RunConfig, DEFAULT_CONFIG
from orbit_krein.exporter import Exporter
from orbit_krein.export_rules import register_export_rule

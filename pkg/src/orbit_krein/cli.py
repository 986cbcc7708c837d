#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""

Command line frontend.

Subcommands:
    classify   classification and B-sign of a 2x2 matrix.
    shoot      symmetric periodic orbit, its monodromy report and optional plot.
    family     energy continuation of a doubly symmetric family with Euler characteristic.
    monodromy  monodromy report of a stored orbit.
    euler      Euler characteristic of stored reports, "file:cover" selects covers.
    lc-lift    regularized lift of a stored orbit.
    selfcheck  invariant suite.

Exit codes: 0 success, 1 usage/parse, 2 math-domain, 3 not-found, 4 stalled, 5 topology.

exports:
    main: entry point.
    build_parser: argument parser.

Authors: orbit_krein developers.

"""

import sys
import logging
import argparse

from pathlib import Path
from typing import List, Optional, Tuple
from json import dumps as j_dumps

from orbit_krein.errors import ConfigError, ContinuationStalled, OrbitKreinError, UsageError
from orbit_krein.config import DEFAULT_CONFIG, RunConfig
from orbit_krein.exporter import Exporter
from orbit_krein.helper_functions import parse_floats, format_float
from orbit_krein.real_sl2 import DEFAULT_TOL, classify, make_sl2, real_krein_sign
from orbit_krein.schemas import load_document
from orbit_krein.systems import get_system
from orbit_krein.shooting import (
    Family,
    Orbit,
    ShootResult,
    continue_family,
    quarter_shift,
    shoot_doubly_symmetric,
    shoot_symmetric,
)
from orbit_krein.monodromy import MonodromyReport, euler_summary, symmetric_orbit_report
from orbit_krein.levi_civita import lc_lift_orbit
from orbit_krein.selfcheck import CHECKS, run_selfcheck


LOG = logging.getLogger(__name__)

_EXTENSIONS = {"json": ".json", "yaml": ".yaml", "csv": ".csv", "svg": ".svg"}

_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class _ArgumentParser(argparse.ArgumentParser):
    """Argument parser raising UsageError instead of exiting."""

    def error(self, message: str) -> None:
        raise UsageError(message)


def _pair(text: str) -> List[float]:
    return parse_floats(text, 2)


def _matrix(text: str) -> List[float]:
    return parse_floats(text, 4)


def build_parser() -> argparse.ArgumentParser:
    """
    Builds the argument parser.
    Option destinations equal DEFAULT_CONFIG keys, unset options are None
    so that configuration file values are kept.
    Negative comma separated values need the "--option=value" form.
    """

    common = _ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON or YAML configuration file.")
    common.add_argument("--log-level", dest="log_level", type=str.upper, choices=_LOG_LEVELS)

    output = _ArgumentParser(add_help=False)
    output.add_argument("--output-directory", dest="output_directory")
    output.add_argument("--output-file", dest="output_file")
    output.add_argument("--format", dest="output_format", type=str.lower, choices=tuple(_EXTENSIONS))
    output.add_argument("--plot", action="store_const", const=True, help="Also write an SVG plot.")
    output.add_argument("--no-overwrite", dest="overwrite", action="store_const", const=False)

    numerics = _ArgumentParser(add_help=False)
    numerics.add_argument("--rtol", type=float)
    numerics.add_argument("--atol", type=float)
    numerics.add_argument("--degenerate-tol", dest="degenerate_tol", type=float)
    numerics.add_argument("--report-tol", dest="report_tol", type=float)

    shooting = _ArgumentParser(add_help=False)
    shooting.add_argument("--system")
    shooting.add_argument("--energy", type=float)
    shooting.add_argument("--bracket", type=_pair, help="Chart coordinate bracket 'low,high'.")
    shooting.add_argument("--branch")
    shooting.add_argument("--inv-index", dest="inv_index", type=int)
    shooting.add_argument(
        "--symmetric", dest="doubly_symmetric", action="store_const", const=False, help="Single symmetry shooting."
    )
    shooting.add_argument("--occurrence", type=int)
    shooting.add_argument("--scan-points", dest="scan_points", type=int)
    shooting.add_argument("--samples", type=int)
    shooting.add_argument("--t-max", dest="t_max", type=float)
    shooting.add_argument("--residual-tol", dest="residual_tol", type=float)
    shooting.add_argument("--certificate-tol", dest="certificate_tol", type=float)

    parser = _ArgumentParser(prog="orbit-krein", description="Real Krein signs of symmetric periodic orbits.")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("classify", parents=[common], help="Classify a 2x2 matrix.")
    p.add_argument("--matrix", type=_matrix, required=True, help="Row major entries 'a,b,c,d'.")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)

    commands.add_parser("shoot", parents=[common, shooting, numerics, output], help="Shoot a symmetric orbit.")

    p = commands.add_parser("family", parents=[common, shooting, numerics, output], help="Continue a family.")
    p.add_argument("--energy-range", dest="energy_range", type=_pair)
    p.add_argument("--step", dest="energy_step", type=float)
    p.add_argument("--min-step", dest="min_step", type=float)

    p = commands.add_parser("monodromy", parents=[common, numerics, output], help="Report of a stored orbit.")
    p.add_argument("orbit_file")

    p = commands.add_parser("euler", parents=[common], help="Euler characteristic of stored reports.")
    p.add_argument("reports", nargs="+", help="Report files, optionally 'file:cover'.")

    p = commands.add_parser("lc-lift", parents=[common, output], help="Regularized lift of a stored orbit.")
    p.add_argument("orbit_file")
    p.add_argument("--branch")
    p.add_argument("--lc-tol", dest="lc_tol", type=float)

    p = commands.add_parser("selfcheck", parents=[common], help="Run the invariant suite.")
    p.add_argument("--check", action="append", choices=tuple(CHECKS))

    return parser


def _run_config(args: argparse.Namespace) -> RunConfig:
    overrides = {key: value for key, value in vars(args).items() if key in DEFAULT_CONFIG}
    return RunConfig(args.config, **overrides)


def _names(config: RunConfig, stem: str, tabular: bool = True) -> Tuple[str, str, str]:
    # Data file name, its stem and format
    output_format = config["output_format"]
    if not tabular and output_format in ("csv", "svg"):
        raise ConfigError(f"Output format '{output_format}' needs a tabular document.")
    if config["output_file"]:
        return config["output_file"], Path(config["output_file"]).stem, output_format
    return stem + _EXTENSIONS[output_format], stem, output_format


def _export(exporter: Exporter, document: dict, name: str, output_format: str) -> Path:
    try:
        return exporter.export(document, name, output_format)
    except OrbitKreinError:
        raise
    except (RuntimeError, OSError, ValueError, ModuleNotFoundError) as e:
        raise UsageError(f"Export of '{name}' failed: {e}") from e


def _summary(report: MonodromyReport) -> str:
    signs = "/".join("undefined" if s is None else s.value for s in report.b_signs)
    return f"{report.classification.value}, B-signs {signs}, trace {format_float(report.trace)}"


def _report(config: RunConfig, orbit: Orbit) -> MonodromyReport:
    report = symmetric_orbit_report(
        get_system(orbit.system),
        orbit,
        tol=config["report_tol"],
        opts=config.integration_options(),
        degenerate_tol=config["degenerate_tol"],
    )
    for violation in report.structure_violations():
        LOG.warning("Orbit '%s': %s", orbit.orbit_id, violation)
    return report


def _shoot(config: RunConfig, energy: float) -> ShootResult:
    system = config.system()
    bracket = tuple(config["bracket"])
    if config["doubly_symmetric"]:
        if not system.is_doubly_real:
            raise ConfigError(f"System '{system.name}' has a single involution.")
        return shoot_doubly_symmetric(system, energy, bracket, config["branch"], config.shooting_options())
    return shoot_symmetric(system, config["inv_index"], energy, bracket, config["branch"], config.shooting_options())


def cmd_classify(args: argparse.Namespace) -> int:
    """Prints "<class>, B-sign <sign>", the sign is undefined on the degenerate band."""
    m = make_sl2(*args.matrix)
    orbit_class = classify(m, args.tol)
    sign = "undefined" if orbit_class.is_degenerate else real_krein_sign(m, args.tol).value
    print(f"{orbit_class.value}, B-sign {sign}")
    return 0


def cmd_shoot(config: RunConfig, exporter: Exporter) -> int:
    config.require("energy", "bracket")
    result = _shoot(config, config["energy"])
    orbit = result.orbit
    if config["doubly_symmetric"] and config["inv_index"] == 2:
        orbit = quarter_shift(orbit, config.system(), config.shooting_options())
    report = _report(config, orbit)

    name, stem, output_format = _names(config, "orbit")
    document = orbit.to_dict()
    document["shooting"] = result.to_dict()
    _export(exporter, document, name, output_format)
    _export(exporter, report.to_dict(), f"{stem}.report.json", "json")
    if config["plot"] and output_format != "svg":
        _export(exporter, document, f"{stem}.svg", "svg")

    print(f"{orbit.orbit_id}: period {format_float(orbit.period)}, {_summary(report)}")
    return 0


def _family_report(family: Family) -> dict:
    nondegenerate = [(report, 1) for report in family.reports() if not report.classification.is_degenerate]
    result = euler_summary(nondegenerate)
    return {
        "schema": "orbit-krein/1",
        "kind": "family-report",
        "system": family.system,
        "members": len(family),
        "transitions": [t.to_dict() for t in family.transitions],
        "violations": list(family.violations),
        "stalled": family.stalled,
        "euler": result.to_dict(),
    }


def cmd_family(config: RunConfig, exporter: Exporter) -> int:
    """Family table is written as CSV, transitions and Euler characteristic as JSON report."""
    config.require("bracket", "energy_range")
    low, high = sorted(config["energy_range"])
    energy = config["energy"] if config["energy"] is not None else low
    if not low <= energy <= high:
        raise ConfigError("Seed energy lies outside the energy range.")
    if config["doubly_symmetric"] and config["inv_index"] != 1:
        raise ConfigError("Doubly symmetric families start on the first involution.")

    seed = _shoot(config, energy)
    exit_code = 0
    try:
        family = continue_family(
            config.system(), seed, (low, high), config["energy_step"], config.shooting_options(), config["min_step"]
        )
    except ContinuationStalled as e:
        LOG.warning("Continuation stalled, writing partial family.")
        family, exit_code = e.partial, e.exit_code
    except ValueError as e:
        if isinstance(e, OrbitKreinError):
            raise
        raise ConfigError(str(e)) from e

    stem = Path(config["output_file"]).stem if config["output_file"] else "family"
    summary = _family_report(family)
    _export(exporter, family.to_dict(), f"{stem}.csv", "csv")
    _export(exporter, summary, f"{stem}.report.json", "json")

    euler = summary["euler"]
    print(f"{len(family)} members, {len(family.transitions)} transitions, chi_sft {euler['chi_sft']}")
    if euler["stable_orbit_exists"]:
        print("stable orbit exists: elliptic member(s) " + ",".join(str(i) for i in euler["elliptic_indices"]))
    for energy in family.violations:
        print(f"negative hyperbolic doubly symmetric member at energy {format_float(energy)}")
    return exit_code


def cmd_monodromy(config: RunConfig, exporter: Exporter, orbit_file: str) -> int:
    orbit = Orbit.from_dict(load_document(orbit_file, "orbit"))
    name, _, output_format = _names(config, "report", tabular=False)
    report = _report(config, orbit)
    _export(exporter, report.to_dict(), name, output_format)
    print(f"{orbit.orbit_id}: {_summary(report)}")
    return 0


def _report_entry(entry: str) -> Tuple[MonodromyReport, int]:
    path, cover = entry, 1
    head, sep, tail = entry.rpartition(":")
    if sep and tail.isdigit():
        path, cover = head, int(tail)
    if cover < 1:
        raise UsageError(f"Cover of '{path}' must be positive.")
    return MonodromyReport.from_dict(load_document(path, "monodromy-report")), cover


def cmd_euler(reports: List[str]) -> int:
    result = euler_summary([_report_entry(entry) for entry in reports])
    print(j_dumps(result.to_dict(), indent=4, sort_keys=True))
    return 0


def cmd_lc_lift(config: RunConfig, exporter: Exporter, orbit_file: str) -> int:
    orbit = Orbit.from_dict(load_document(orbit_file, "orbit"))
    curve = lc_lift_orbit(orbit, config["branch"], config["lc_tol"])
    name, stem, output_format = _names(config, "lifted")
    document = curve.to_dict()
    _export(exporter, document, name, output_format)
    if config["plot"] and output_format != "svg":
        _export(exporter, document, f"{stem}.svg", "svg")
    residual = max(curve.residuals[key] for key in ("sigma1", "sigma2", "dsym"))
    print(f"{orbit.orbit_id}: winding {curve.winding}, closure {curve.residuals['closure']:.3e}, symmetry {residual:.3e}")
    return 0


def cmd_selfcheck(checks: Optional[List[str]]) -> int:
    results = run_selfcheck(checks)
    for result in results:
        print(result.line())
    return 0 if all(result.passed for result in results) else 2


def main(argv: Optional[List[str]] = None) -> int:
    """
    Command line entry point.

    Arguments:
        argv: Optional argument list. Default sys.argv[1:].

    Returns:
        exit code.
    """

    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(argv)
        if args.command == "classify":
            logging.basicConfig(level=args.log_level or DEFAULT_CONFIG["log_level"])
            return cmd_classify(args)

        config = _run_config(args)
        logging.basicConfig(level=config["log_level"])
        exporter = Exporter(config.config, command=" ".join(["orbit-krein"] + argv))

        if args.command == "shoot":
            return cmd_shoot(config, exporter)
        if args.command == "family":
            return cmd_family(config, exporter)
        if args.command == "monodromy":
            return cmd_monodromy(config, exporter, args.orbit_file)
        if args.command == "euler":
            return cmd_euler(args.reports)
        if args.command == "lc-lift":
            return cmd_lc_lift(config, exporter, args.orbit_file)
        return cmd_selfcheck(args.check)

    except OrbitKreinError as e:
        LOG.debug("command line %s", str(argv))
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())

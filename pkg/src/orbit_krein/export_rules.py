#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""

Module containing collection of rules as functions to export result documents.

Export rules defined for the Exporter,
rules can be customized or added through
the register_export_rule function.

All rule functions must have the same arguments.

Arguments:
    export_object: dict document to export.
    outfile: Path object to target file.

Tabular rules (CSV, SVG) use the "columns" and "rows" entries of the document,
or those of its "trajectory" entry for orbit documents.

exports:
    EXPORT_RULES: dictionary mapping format to export rule.
    register_export_rule: adds a rule to EXPORT_RULES.

Authors: orbit_krein developers.

"""

import csv
import logging

from pathlib import Path
from typing import Callable, List, Tuple
from json import dump as j_dump

from orbit_krein.helper_functions import format_float


LOG = logging.getLogger(__name__)

try:
    from yaml import safe_dump as y_dump
except ImportError:

    def y_dump(*args, **kwargs):
        """Mock yaml dump function when PyYAML not found."""
        raise ModuleNotFoundError("PyYAML package was not found in environment.")


try:
    import matplotlib

    matplotlib.use("Agg")
    from matplotlib import pyplot as plt

except ImportError:
    plt = None

# Fixed SVG element ids
_SVG_HASH_SALT = "orbit-krein"

# Relative margin around the data bounds of plots
_PLOT_MARGIN = 0.05

# Plotted column pairs by coordinate tag
_PLOT_COLUMNS = {
    "base": ("q1", "q2"),
    "lc": ("z_re", "z_im"),
}


def _table(export_object: dict) -> Tuple[List[str], List[list]]:
    # Columns and rows of a tabular document
    table = export_object.get("trajectory", export_object)
    if "columns" not in table or "rows" not in table:
        LOG.debug("document keys %s", str(sorted(export_object)))
        raise ValueError("Document has no tabular content.")
    return list(table["columns"]), list(table["rows"])


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, (int, float)):
        return format_float(value)
    return str(value)


def _export_json(export_object: dict, outfile: Path) -> None:
    # Exports JSON export_object to file.

    LOG.debug("   exporting JSON to file '%s'", str(outfile))

    with outfile.open("w", encoding="utf-8") as f:
        j_dump(export_object, f, indent=4, sort_keys=True)
        f.write("\n")


def _export_yaml(export_object: dict, outfile: Path) -> None:
    # Exports YAML object to file.

    LOG.debug("   exporting YAML to file '%s'", str(outfile))

    with outfile.open("w", encoding="utf-8") as f:
        y_dump(export_object, f, sort_keys=True)


def _export_csv(export_object: dict, outfile: Path) -> None:
    # Exports header row and rows with 17 significant digits.

    LOG.debug("   exporting CSV to file '%s'", str(outfile))

    columns, rows = _table(export_object)
    with outfile.open("w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_csv_cell(value) for value in row])


def _bounds(values: List[float]) -> Tuple[float, float]:
    low, high = min(values), max(values)
    span = high - low
    if span == 0.0:
        span = max(abs(low), 1.0)
    return low - _PLOT_MARGIN * span, high + _PLOT_MARGIN * span


def _export_svg(export_object: dict, outfile: Path) -> None:
    # Plots the configuration space curve to a static SVG file.

    LOG.debug("   exporting SVG to file '%s'", str(outfile))

    if plt is None:
        raise ModuleNotFoundError("matplotlib package was not found in environment.")

    table = export_object.get("trajectory", export_object)
    columns, rows = _table(export_object)
    x_key, y_key = _PLOT_COLUMNS.get(table.get("coordinates", "base"), _PLOT_COLUMNS["base"])
    if x_key not in columns or y_key not in columns or not rows:
        LOG.debug("columns %s", str(columns))
        raise ValueError("Document has no configuration space columns to plot.")
    x = [float(row[columns.index(x_key)]) for row in rows]
    y = [float(row[columns.index(y_key)]) for row in rows]

    with matplotlib.rc_context({"svg.hashsalt": _SVG_HASH_SALT}):
        fig, ax = plt.subplots(figsize=(6, 6))
        ax.plot(x, y, linewidth=1.0)
        ax.set_xlim(*_bounds(x))
        ax.set_ylim(*_bounds(y))
        ax.set_xlabel(x_key)
        ax.set_ylabel(y_key)
        ax.set_title(str(export_object.get("orbit_id", export_object.get("system", ""))))
        fig.savefig(outfile, format="svg", metadata={"Date": None})
        plt.close(fig)


EXPORT_RULES = {
    "JSON": _export_json,
    "YAML": _export_yaml,
    "CSV": _export_csv,
    "SVG": _export_svg,
}


def register_export_rule(format_name: str, rule: Callable) -> None:
    """
    Function to register new rules in the EXPORT_RULES dictionary.

    Arguments:
        format_name: string name of format to export.
        rule: callable rule to export to new format.
    """

    if format_name.upper() in EXPORT_RULES:
        raise KeyError("Export rule already exists")

    EXPORT_RULES[format_name.upper()] = rule

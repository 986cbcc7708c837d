#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""

Module containing collection of convenience functions internally used.

exports:
    check_dir: Checks string path to directory, if none exists in destination then creates new.
    as_state: Validates a 4 component phase space point.
    parse_branch: Converts branch words and signs to +1 / -1.
    branch_symbol: Converts +1 / -1 to "+" / "-".
    parse_floats: Parses comma separated list of floats.
    format_float: Fixed 17 significant digit float formatting.
    winding_number: Winding number of a sampled closed planar curve around the origin.
    sup_norm: Maximum absolute entry of an array.

Authors: orbit_krein developers.

"""

import logging

from pathlib import Path
from typing import Tuple, Union, Sequence, List

import numpy as np

from orbit_krein.errors import UsageError


LOG = logging.getLogger(__name__)

# Accepted branch words
_BRANCH_WORDS = {
    "+": 1,
    "plus": 1,
    "direct": 1,
    "-": -1,
    "minus": -1,
    "retro": -1,
    "retrograde": -1,
}


def check_dir(dir_path: Union[str, Path], allow_existing: bool = False) -> Tuple[Path, bool]:
    """
    Checks directory path.
    If a directory with the same name already exists then continue.

    Arguments:
        dir_path: String path to output directory.

    Keyword arguments:
        allow_existing: Control boolean to allow the use of existing folders. Default: False.

    Returns:
        tuple of Path object to output directory and state boolean indicating directory creation.
    """

    path = Path(dir_path)

    if str(path) != ".":
        if path.exists():
            if not allow_existing:
                LOG.debug("directory path '%s'", str(path))
                raise RuntimeError("Directory already exists.")
            if not path.is_dir():
                LOG.debug("found path '%s'", str(path))
                raise NotADirectoryError("Incorrect path to directory.")
        else:
            path.mkdir(parents=True)
            return path, True

    return path, False


def as_state(x: Union[Sequence[float], np.ndarray]) -> np.ndarray:
    """
    Validates phase space point (q1, q2, p1, p2).

    Arguments:
        x: array-like of four finite reals.

    Returns:
        float numpy array of shape (4,).
    """

    state = np.asarray(x, dtype=float).reshape(-1)
    if state.shape != (4,):
        LOG.debug("state shape %s", str(state.shape))
        raise ValueError("Phase space point must have four components.")
    if not np.all(np.isfinite(state)):
        LOG.debug("state %s", str(state))
        raise ValueError("Phase space point must be finite.")
    return state


def parse_branch(branch: Union[int, str]) -> int:
    """
    Converts branch specification to +1 or -1.
    Accepts +1/-1 and the words "+", "-", "plus", "minus", "direct", "retro", "retrograde".
    """

    if isinstance(branch, str):
        key = branch.strip().lower()
        if key not in _BRANCH_WORDS:
            LOG.debug("branch '%s'", branch)
            raise UsageError("Unknown branch specification.")
        return _BRANCH_WORDS[key]
    if branch in (1, -1):
        return int(branch)
    LOG.debug("branch %r", branch)
    raise UsageError("Branch must be +1 or -1.")


def branch_symbol(branch: int) -> str:
    """Returns "+" for positive branch, "-" otherwise."""
    return "+" if branch > 0 else "-"


def parse_floats(text: str, count: int = -1) -> List[float]:
    """
    Parses comma separated floats.

    Arguments:
        text: string like "0.05,0.6".

    Keyword arguments:
        count: expected number of values, negative for any. Default -1.

    Returns:
        list of floats.
    """

    try:
        values = [float(part) for part in text.split(",") if part.strip() != ""]
    except ValueError as e:
        LOG.debug("text '%s'", text)
        raise UsageError("Could not parse comma separated numbers.") from e
    if count >= 0 and len(values) != count:
        LOG.debug("text '%s' , expected %i values", text, count)
        raise UsageError("Wrong number of comma separated numbers.")
    return values


def format_float(value: float) -> str:
    """Deterministic float formatting with 17 significant digits."""
    return format(float(value), ".17g")


def winding_number(q: np.ndarray) -> int:
    """
    Winding number around the origin of a closed planar curve.

    Arguments:
        q: array of shape (N, 2) of positions, first and last sample equal.

    Returns:
        integer winding number, counter clockwise positive.
    """

    q = np.asarray(q, dtype=float)
    if np.any(np.hypot(q[:, 0], q[:, 1]) == 0.0):
        raise ValueError("Curve passes through the origin.")
    angles = np.unwrap(np.arctan2(q[:, 1], q[:, 0]))
    return int(round((angles[-1] - angles[0]) / (2.0 * np.pi)))


def sup_norm(array: Union[np.ndarray, Sequence[float]]) -> float:
    """Maximum absolute entry, complex entries by modulus."""
    array = np.asarray(array)
    return float(np.max(np.abs(array))) if array.size else 0.0

#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""

Module containing the JSON schemas of run configurations and result documents.

Documents are tagged "schema": "orbit-krein/1" and a "kind".
If the jsonschema package is present, configurations and loaded documents
are validated against the schemas below, otherwise only the tags are checked.

exports:
    SCHEMA_TAG: version tag of every document.
    RUN_CONFIG_SCHEMA: schema of the merged run configuration.
    DOCUMENT_SCHEMAS: dictionary mapping document kind to schema.
    validate_config: validation of a run configuration.
    load_document: reads and validates a JSON document.

Authors: orbit_krein developers.

"""

import logging

from pathlib import Path
from typing import Union
from json import load as j_load, JSONDecodeError

from orbit_krein.errors import ConfigError, UsageError


LOG = logging.getLogger(__name__)

# Try to load jsonschema package components for validation
# In case of failure, validation is disabled
try:
    from jsonschema import validate, ValidationError

    _DO_VALIDATE = True

except ImportError:
    LOG.info("JSONSchema package not found, disabling validation.")

    def validate(*args, **kwargs) -> bool:
        """Mock validate method for compatibility. Returns True."""
        return True

    ValidationError = ValueError
    _DO_VALIDATE = False


SCHEMA_TAG = "orbit-krein/1"

_NUMBER = {"type": "number"}
_OPTIONAL_NUMBER = {"type": ["number", "null"]}
_PAIR = {"type": "array", "items": _NUMBER, "minItems": 2, "maxItems": 2}
_OPTIONAL_PAIR = {"anyOf": [_PAIR, {"type": "null"}]}
_POSITIVE = {"type": "number", "exclusiveMinimum": 0}
_MATRIX_2 = {
    "type": "array",
    "items": {"type": "array", "items": _NUMBER, "minItems": 2, "maxItems": 2},
    "minItems": 2,
    "maxItems": 2,
}
_SIGN = {"enum": ["+", "-", None]}
_CLASSES = ["positive-hyperbolic", "negative-hyperbolic", "elliptic", "degenerate-plus", "degenerate-minus"]
_TABLE = {
    "columns": {"type": "array", "items": {"type": "string"}},
    "rows": {"type": "array", "items": {"type": "array"}},
}

RUN_CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "system": {"type": "string"},
        "energy": _OPTIONAL_NUMBER,
        "bracket": _OPTIONAL_PAIR,
        "branch": {"type": "string"},
        "inv_index": {"enum": [1, 2]},
        "doubly_symmetric": {"type": "boolean"},
        "occurrence": {"type": "integer", "minimum": 1},
        "scan_points": {"type": "integer", "minimum": 2},
        "residual_tol": _POSITIVE,
        "certificate_tol": _POSITIVE,
        "t_max": _POSITIVE,
        "samples": {"type": "integer", "minimum": 5},
        "rtol": _POSITIVE,
        "atol": _POSITIVE,
        "energy_tol": _POSITIVE,
        "sympl_tol": _POSITIVE,
        "degenerate_tol": _POSITIVE,
        "report_tol": _POSITIVE,
        "energy_range": _OPTIONAL_PAIR,
        "energy_step": _POSITIVE,
        "min_step": {"anyOf": [_POSITIVE, {"type": "null"}]},
        "lc_tol": _POSITIVE,
        "output_directory": {"type": "string"},
        "output_file": {"type": ["string", "null"]},
        "output_format": {"enum": ["json", "yaml", "csv", "svg"]},
        "plot": {"type": "boolean"},
        "overwrite": {"type": "boolean"},
        "log_level": {"enum": ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]},
    },
}

_HEADER = {
    "schema": {"const": SCHEMA_TAG},
    "kind": {"type": "string"},
    "system": {"type": "string"},
}

DOCUMENT_SCHEMAS = {
    "orbit": {
        "type": "object",
        "required": ["schema", "kind", "system", "orbit_id", "initial_state", "period", "energy", "certificate", "trajectory"],
        "properties": {
            **_HEADER,
            "orbit_id": {"type": "string"},
            "initial_state": {"type": "array", "items": _NUMBER, "minItems": 4, "maxItems": 4},
            "period": _POSITIVE,
            "energy": _NUMBER,
            "closure": _NUMBER,
            "certificate": {
                "type": "object",
                "required": ["inv_index", "residuals"],
                "properties": {
                    "inv_index": {"enum": [1, 2]},
                    "second_index": {"enum": [1, 2, None]},
                    "residuals": {"type": "object", "additionalProperties": _NUMBER},
                },
            },
            "trajectory": {
                "type": "object",
                "required": ["columns", "rows"],
                "properties": {
                    **_TABLE,
                    "rows": {
                        "type": "array",
                        "minItems": 2,
                        "items": {"type": "array", "items": _NUMBER, "minItems": 5, "maxItems": 5},
                    },
                },
            },
        },
    },
    "monodromy-report": {
        "type": "object",
        "required": [
            "schema",
            "kind",
            "system",
            "orbit_id",
            "M0",
            "M_half",
            "psi",
            "phi",
            "b_signs",
            "classification",
            "cz_parity",
        ],
        "properties": {
            **_HEADER,
            "orbit_id": {"type": "string"},
            "M0": _MATRIX_2,
            "M_half": _MATRIX_2,
            "psi": _MATRIX_2,
            "phi": _MATRIX_2,
            "b_signs": {"type": "array", "items": _SIGN, "minItems": 2, "maxItems": 2},
            "classification": {"enum": _CLASSES},
            "cz_parity": {"enum": ["odd", "even", "undefined"]},
            "doubly_symmetric": {"type": "boolean"},
        },
    },
    "family": {
        "type": "object",
        "required": ["schema", "kind", "system", "columns", "rows"],
        "properties": {**_HEADER, **_TABLE, "stalled": {"type": "boolean"}},
    },
    "lifted-curve": {
        "type": "object",
        "required": ["schema", "kind", "system", "orbit_id", "winding", "columns", "rows"],
        "properties": {**_HEADER, **_TABLE, "winding": {"type": "integer"}},
    },
}


def validate_config(config: dict) -> None:
    """
    Validates a merged run configuration against RUN_CONFIG_SCHEMA.
    Only run if jsonschema package is present in python environment.

    Arguments:
        config: configuration dictionary.
    """

    if not _DO_VALIDATE:
        return
    try:
        validate(instance=config, schema=RUN_CONFIG_SCHEMA)
    except ValidationError as e:
        LOG.debug("configuration %s", str(config))
        raise ConfigError(f"Invalid configuration: {e.message}") from e


def load_document(path: Union[str, Path], kind: str) -> dict:
    """
    Reads a JSON result document and checks its schema tag and kind.

    Arguments:
        path: string path to JSON file.
        kind: expected document kind, key of DOCUMENT_SCHEMAS.

    Returns:
        document dictionary.
    """

    path = Path(path)
    LOG.info("Loading %s document '%s' ...", kind, str(path))
    try:
        with path.open("r", encoding="utf-8") as f:
            document = j_load(f)
    except FileNotFoundError as e:
        LOG.debug("document path '%s'", str(path))
        raise UsageError("Input document not found.") from e
    except (JSONDecodeError, UnicodeDecodeError) as e:
        LOG.debug("document path '%s' , error %s", str(path), str(e))
        raise UsageError("Input document is not valid JSON.") from e

    if not isinstance(document, dict) or document.get("schema") != SCHEMA_TAG:
        LOG.debug("document path '%s'", str(path))
        raise UsageError(f"Input document is not tagged '{SCHEMA_TAG}'.")
    if document.get("kind") != kind:
        LOG.debug("document kind %r , expected %r", document.get("kind"), kind)
        raise UsageError(f"Input document is not of kind '{kind}'.")

    if _DO_VALIDATE:
        try:
            validate(instance=document, schema=DOCUMENT_SCHEMAS[kind])
        except ValidationError as e:
            LOG.debug("document path '%s'", str(path))
            raise UsageError(f"Input document does not match schema: {e.message}") from e

    return document

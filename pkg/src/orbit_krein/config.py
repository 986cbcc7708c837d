#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""

Run configuration handling.
The effective configuration is built as
    DEFAULT_CONFIG < configuration file (JSON or YAML) < command line flags
and validated before any numerics are started.

exports:
    DEFAULT_CONFIG dictionary
    RunConfig class
    load_config_file function

Authors: orbit_krein developers.

"""

import logging

from copy import deepcopy
from pathlib import Path
from typing import Optional, Union
from json import load as j_load, JSONDecodeError

from orbit_krein.errors import ConfigError, OrbitKreinError
from orbit_krein.flow import IntegrationOptions
from orbit_krein.helper_functions import parse_branch
from orbit_krein.schemas import validate_config
from orbit_krein.shooting import ShootingOptions
from orbit_krein.systems import SystemDef, get_system


LOG = logging.getLogger(__name__)

try:
    from yaml import safe_load as y_load, YAMLError
except ImportError:

    def y_load(*args, **kwargs):
        """Mock yaml load function when PyYAML not found."""
        raise ModuleNotFoundError("PyYAML package was not found in environment.")

    YAMLError = ValueError


# Default configuration parameters for numerical commands:
# "system": registered system name, "hill" or "langmuir". Default "hill" .
# "energy": energy of the orbit to shoot, seed energy of a family. Default None (required by shoot) .
# "bracket": pair of chart coordinates bracketing the shooting root. Default None (required by shoot and family) .
# "branch": momentum branch on the fixed set, "+", "-", "direct" or "retro". Default "+" .
# "inv_index": involution whose fixed set holds the start point, 1 or 2. Default 1 .
# "doubly_symmetric": control boolean to shoot at the second involution's section (quarter period). Default True .
# "occurrence": index of the target section crossing. Default 1 .
# "scan_points": grid size of the sign change scan over the bracket. Default 24 .
# "residual_tol": accepted shooting residual |F|. Default 1e-8 .
# "certificate_tol": accepted symmetry certificate residual. Default 1e-7 .
# "t_max": search horizon of section crossings. Default 50.0 .
# "samples": stored orbit samples, 1 mod 4. Default 257 .
# "rtol": relative integration step error. Default 1e-12 .
# "atol": absolute integration step error. Default 1e-12 .
# "energy_tol": energy drift warning threshold. Default 1e-10 .
# "sympl_tol": symplecticity drift warning threshold. Default 1e-8 .
# "degenerate_tol": width of the degenerate trace band around +2 and -2. Default 1e-9 .
# "report_tol": accepted symmetry residual when building monodromy reports. Default 1e-7 .
# "energy_range": pair of end energies of a family. Default None (required by family) .
# "energy_step": positive family energy step. Default 0.05 .
# "min_step": smallest continuation step before stalling. Default None (energy_step / 64) .
# "lc_tol": accepted residuals of the regularized lift. Default 1e-6 .
# "output_directory": string path to output directory. Default "." .
# "output_file": string name of the main output file. Default None (derived from the command) .
# "output_format": "json", "yaml", "csv" or "svg". Default "json" .
# "plot": control boolean to additionally write an SVG of the configuration space curve. Default False .
# "overwrite": control boolean to allow overwriting existing output files. Default True .
# "log_level": logging level name. Default "WARNING" .
DEFAULT_CONFIG = {
    "system": "hill",
    "energy": None,
    "bracket": None,
    "branch": "+",
    "inv_index": 1,
    "doubly_symmetric": True,
    "occurrence": 1,
    "scan_points": 24,
    "residual_tol": 1e-8,
    "certificate_tol": 1e-7,
    "t_max": 50.0,
    "samples": 257,
    "rtol": 1e-12,
    "atol": 1e-12,
    "energy_tol": 1e-10,
    "sympl_tol": 1e-8,
    "degenerate_tol": 1e-9,
    "report_tol": 1e-7,
    "energy_range": None,
    "energy_step": 0.05,
    "min_step": None,
    "lc_tol": 1e-6,
    "output_directory": ".",
    "output_file": None,
    "output_format": "json",
    "plot": False,
    "overwrite": True,
    "log_level": "WARNING",
}

# Keys whose default is None, with their value type
_OPTIONAL_TYPES = {
    "energy": float,
    "bracket": list,
    "energy_range": list,
    "min_step": float,
    "output_file": str,
}

_FORMATS = ("json", "yaml", "csv", "svg")
_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def _coerce(key: str, value):
    # Type check against the default, ints are accepted for floats, bools never for numbers
    expected = _OPTIONAL_TYPES.get(key, type(DEFAULT_CONFIG[key]))
    if value is None and key in _OPTIONAL_TYPES:
        return None
    if expected is float and isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if expected is int and isinstance(value, int) and not isinstance(value, bool):
        return value
    if expected is list and isinstance(value, (list, tuple)):
        if len(value) != 2 or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
            LOG.debug("key '%s' , value %r", key, value)
            raise ConfigError(f"Configuration key '{key}' needs a pair of numbers.")
        return [float(v) for v in value]
    if expected in (str, bool) and isinstance(value, expected):
        return value
    LOG.debug("key '%s' , value %r , expected %s", key, value, expected.__name__)
    raise ConfigError(f"Incorrect type for configuration key '{key}'.")


def load_config_file(path: Union[str, Path]) -> dict:
    """
    Reads a configuration file.
    Files ending in .yaml or .yml are read with PyYAML, every other file as JSON.

    Arguments:
        path: string path to configuration file.

    Returns:
        configuration dictionary.
    """

    path = Path(path)
    LOG.info("Loading configuration file '%s' ...", str(path))
    try:
        with path.open("r", encoding="utf-8") as f:
            if path.suffix.lower() in (".yaml", ".yml"):
                content = y_load(f)
            else:
                content = j_load(f)
    except FileNotFoundError as e:
        LOG.debug("configuration path '%s'", str(path))
        raise ConfigError("Configuration file not found.") from e
    except ModuleNotFoundError as e:
        raise ConfigError(str(e)) from e
    except (JSONDecodeError, YAMLError, UnicodeDecodeError) as e:
        LOG.debug("configuration path '%s' , error %s", str(path), str(e))
        raise ConfigError("Configuration file could not be parsed.") from e

    if content is None:
        return {}
    if not isinstance(content, dict):
        LOG.debug("configuration content %r", content)
        raise ConfigError("Configuration file must contain a mapping.")
    return content


class RunConfig:
    """
    Validated run configuration.

    Attributes:
        config: Dictionary containing configuration parameters.

    Methods:
        require: checks that optional keys have been set.
        system: registered SystemDef of the configuration.
        integration_options: IntegrationOptions from the tolerance keys.
        shooting_options: ShootingOptions from the shooting keys.
    """

    def __init__(self, config_file: Optional[Union[str, Path]] = None, **kwargs) -> None:
        """
        Constructor of RunConfig class.

        Arguments:
            config_file: Optional. String path to JSON or YAML configuration file.

        Keyword arguments:
            key (as string), value pairs overriding file and default values, None values are skipped.
        """

        self.config = deepcopy(DEFAULT_CONFIG)
        key_list = list(self.config.keys())

        sources = []
        if config_file is not None:
            sources.append(load_config_file(config_file))
        sources.append({key: value for key, value in kwargs.items() if value is not None})

        for source in sources:
            for key, value in source.items():
                if key not in self.config:
                    LOG.debug("configuration keys %s", str(sorted(source)))
                    raise ConfigError(f"Unknown configuration key '{key}'.")
                self.config[key] = _coerce(key, value)
                if key in key_list:
                    key_list.remove(key)

        for key in key_list:
            LOG.debug(
                "No argument found for '%s' initializing by default '%s'",
                key,
                str(self.config[key]),
            )

        self._validate()

    def _validate(self) -> None:
        config = self.config
        config["output_format"] = config["output_format"].lower()
        config["log_level"] = config["log_level"].upper()
        if config["output_format"] not in _FORMATS:
            raise ConfigError(f"Unknown output format '{config['output_format']}'.")
        if config["log_level"] not in _LOG_LEVELS:
            raise ConfigError(f"Unknown log level '{config['log_level']}'.")
        if config["inv_index"] not in (1, 2):
            raise ConfigError("Configuration key 'inv_index' must be 1 or 2.")
        try:
            parse_branch(config["branch"])
        except OrbitKreinError as e:
            raise ConfigError(f"Unknown branch '{config['branch']}'.") from e
        get_system(config["system"])
        validate_config(config)
        # Options check their own ranges
        try:
            self.shooting_options()
        except ValueError as e:
            raise ConfigError(str(e)) from e

    def __getitem__(self, key: str):
        return self.config[key]

    def require(self, *keys: str) -> None:
        """Raises ConfigError when any of the given keys is still unset."""
        missing = [key for key in keys if self.config[key] is None]
        if missing:
            LOG.debug("missing keys %s", str(missing))
            raise ConfigError(f"Missing required parameter(s): {', '.join(missing)}.")

    def system(self) -> SystemDef:
        return get_system(self.config["system"])

    def integration_options(self) -> IntegrationOptions:
        return IntegrationOptions(
            rtol=self.config["rtol"],
            atol=self.config["atol"],
            energy_tol=self.config["energy_tol"],
            sympl_tol=self.config["sympl_tol"],
        )

    def shooting_options(self) -> ShootingOptions:
        return ShootingOptions(
            occurrence=self.config["occurrence"],
            scan_points=self.config["scan_points"],
            residual_tol=self.config["residual_tol"],
            t_max=self.config["t_max"],
            certificate_tol=self.config["certificate_tol"],
            samples=self.config["samples"],
            integration=self.integration_options(),
        )

#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""

Exporter class to save result documents to file.
Every data file gets a sidecar "<file>.meta.json" holding
the creation timestamp, package version and command,
data files themselves carry no timestamps.

exports:
    Exporter class

Authors: orbit_krein developers.

"""

import logging

from pathlib import Path
from typing import Optional
from datetime import datetime, timezone

from orbit_krein.helper_functions import check_dir
from orbit_krein.schemas import SCHEMA_TAG
from orbit_krein.export_rules import EXPORT_RULES, register_export_rule


LOG = logging.getLogger(__name__)


class Exporter:
    """
    Convenience class for handling different export formats.

    Attributes:
        config: Dictionary containing configuration parameters.
        command: string command line recorded in metadata sidecars.

    Methods:
        export: exporting procedure corresponding to output format in configuration.
    """

    def __init__(self, config: dict, command: str = "") -> None:
        """
        Constructor of Exporter class.

        Arguments:
            config: dictionary containing configuration parameters.

        Keyword arguments:
            command: recorded command line. Default "".
        """

        self.config = config
        self.command = command

    def export(self, document: dict, output_file: Optional[str] = None, output_format: Optional[str] = None) -> Path:
        """
        Exports given document to file.
        Uses configuration parameters inside of internal dictionary
        unless file name or format are given.

        Arguments:
            document: dictionary to export.

        Keyword arguments:
            output_file: Optional file name inside the output directory.
            output_format: Optional format name.

        Returns:
            Path to written data file.
        """

        LOG.info("Exporting document ...")

        export_format = (output_format or self.config["output_format"]).upper()
        if export_format not in EXPORT_RULES:
            LOG.debug("Export format type '%s'", export_format)
            raise RuntimeError("Unknown export format type.")
        export_directory = check_dir(self.config["output_directory"], allow_existing=True)[0]
        export_file = export_directory / (output_file or self.config["output_file"])

        if export_file.exists():
            if export_file.is_file():
                if self.config["overwrite"]:
                    LOG.warning(
                        "Output file exists '%s', overwriting.",
                        str(export_file),
                    )
                else:
                    LOG.debug("Export file path '%s'", str(export_file))
                    raise RuntimeError("Output file exists; overwriting not allowed.")
            else:
                LOG.debug("Export file path '%s' not a file", str(export_file))
                raise RuntimeError("Conflicting path to output file; cannot overwrite.")

        EXPORT_RULES[export_format](document, export_file)
        EXPORT_RULES["JSON"](self._header(export_file, export_format), self.meta_path(export_file))

        LOG.info("Done!")
        return export_file

    def _header(self, export_file: Path, export_format: str) -> dict:
        from orbit_krein import __version__

        return {
            "schema": SCHEMA_TAG,
            "kind": "metadata",
            "file": export_file.name,
            "format": export_format.lower(),
            "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            "version": __version__,
            "command": self.command,
        }

    @staticmethod
    def meta_path(export_file: Path) -> Path:
        """Path of the metadata sidecar of a data file."""
        return export_file.with_name(export_file.name + ".meta.json")


# Class level method to register export rules
Exporter.register_rule = register_export_rule

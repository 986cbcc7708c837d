#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""Runs the command line frontend with python -m orbit_krein."""

import sys

from orbit_krein.cli import main


sys.exit(main())

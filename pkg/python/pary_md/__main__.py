#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""Entry point for ``python -m pary_md``."""

import sys

from pary_md.cli import main

sys.exit(main())

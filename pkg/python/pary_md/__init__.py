#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Pary MD: refined enumeration of p-ary labeled trees by the size of their
maximal decreasing subtree.
"""

__version__ = "0.1.0"

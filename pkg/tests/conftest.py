#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""Shared pytest fixtures for the pary_md test suite."""

import os
import sys
from pathlib import Path

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "python"))

from pary_md.enumeration import EnumerationBudget  # noqa: E402
from pary_md.tree_model import PAryTree, canonical_decode  # noqa: E402

FIXTURES_DIR = Path(__file__).resolve().parent / "fixtures"

# the 11-vertex ternary tree whose MD subtree is {9, 8, 2, 4, 1, 3}
ELEVEN_VERTEX_TREE = (
    "(9,(8,_,(1,(7,_,_,_),(10,_,_,_),_),_),(2,_,_,_),"
    "(4,_,(3,_,_,_),(6,(11,_,_,_),_,(5,_,_,_))))"
)


@pytest.fixture
def ternary_tree() -> PAryTree:
    return canonical_decode(ELEVEN_VERTEX_TREE)


@pytest.fixture
def budget() -> EnumerationBudget:
    return EnumerationBudget(10 ** 7)


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES_DIR

#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Exception hierarchy shared by the counting, tree and enumeration modules.
"""

from typing import List, Optional


class ParyMdError(Exception):
    """Base class for every error raised by pary_md."""


class InvalidArity(ParyMdError, ValueError):
    """Raised when the arity p is smaller than 2."""

    def __init__(self, p: int):
        super().__init__(f"arity must be at least 2, got {p}")
        self.p = p


class NegativeBase(ParyMdError, ValueError):
    """Raised when a falling factorial is asked for a negative base."""

    def __init__(self, base: int):
        super().__init__(f"falling factorial base must be non-negative, got {base}")
        self.base = base


class EmptyTree(ParyMdError):
    """Raised by statistics that are undefined on the empty tree."""


class InvalidTree(ParyMdError):
    """Raised when a tree fails validation."""

    def __init__(self, diagnostics: List[str]):
        super().__init__("invalid tree: " + "; ".join(diagnostics))
        self.diagnostics = diagnostics


class AttachmentMismatch(ParyMdError):
    """Raised when a forest component cannot be grafted back onto its leaf."""


class ParseError(ParyMdError):
    """Raised on malformed canonical tree text."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class BudgetExceeded(ParyMdError):
    """Raised when an enumeration generates more objects than its budget allows."""

    def __init__(self, limit: int):
        super().__init__(f"enumeration budget of {limit} objects exceeded")
        self.limit = limit


class NonIntegerSum(ParyMdError, ArithmeticError):
    """Raised when the t(n,k) summation does not come out integral."""


class RecurrenceConflict(ParyMdError, ArithmeticError):
    """Raised when the y(n,k) recursion disagrees with its boundary conditions."""


class RowSumMismatch(ParyMdError, ArithmeticError):
    """Raised when a row of t(n,k) does not sum to the number of labeled trees."""

    def __init__(self, p: int, n: int, got: int, expected: Optional[int]):
        super().__init__(f"row p={p} n={n} sums to {got}, expected {expected}")
        self.got = got
        self.expected = expected

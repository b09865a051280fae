#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Exact combinatorial primitives.

Everything here works on Python integers, which are arbitrary precision, so
no value in this package can overflow. All functions are pure.
"""

import math

from pary_md.errors import InvalidArity, NegativeBase


def check_arity(p: int) -> None:
    """Raise InvalidArity unless p >= 2."""
    if p < 2:
        raise InvalidArity(p)


def binomial(n: int, k: int) -> int:
    """Binomial coefficient C(n, k).

    Out-of-range arguments (n < 0, k < 0 or k > n) give 0 instead of an error
    so that vacuous terms of the recurrences vanish.
    """
    if n < 0 or k < 0 or k > n:
        return 0
    return math.comb(n, k)


def falling(a: int, length: int) -> int:
    """Falling factorial a (a-1) ... (a-length+1).

    Args:
        a: Base, must be non-negative
        length: Number of factors; 0 gives the empty product 1

    Returns:
        The product, or 0 once a factor reaches zero

    Raises:
        NegativeBase: If a < 0
    """
    if a < 0:
        raise NegativeBase(a)
    if length < 0:
        raise ValueError(f"falling factorial length must be non-negative, got {length}")
    # math.perm already returns 0 for length > a
    return math.perm(a, length)


def fuss_catalan(p: int, n: int) -> int:
    """Order-p Fuss-Catalan number C(pn+1, n) / (pn+1), the number of p-ary shapes on n vertices."""
    check_arity(p)
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    quotient, remainder = divmod(binomial(p * n + 1, n), p * n + 1)
    assert remainder == 0, f"Fuss-Catalan division not exact for p={p}, n={n}"
    return quotient


def decreasing_count(p: int, n: int) -> int:
    """Number of decreasing p-ary trees on [n]: prod_{j<n} (1 + (p-1) j)."""
    check_arity(p)
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    return math.prod(1 + (p - 1) * j for j in range(n))


def labeled_tree_count(p: int, n: int) -> int:
    """Cardinality of T^(p)_n, i.e. n! C_n^(p) = (pn)_(n-1); 1 for the empty tree."""
    check_arity(p)
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    if n == 0:
        return 1
    return falling(p * n, n - 1)

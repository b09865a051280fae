#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Counting formulas for the three families of p-ary labeled trees.

    y(n,k)  trees on [n] made of a decreasing tree on k vertices plus n-k
            increasing leaves (recursion over n, boundary rows closed form)
    f(n,k)  unordered forests on [n] with k components (closed form)
    t(n,k)  trees on [n] whose maximal decreasing subtree has k vertices
            (weighted sum of y(m,k) over m)

Values are memoized in one CountTable per (family, p). The y table is filled
bottom-up by rows of n, so no call recurses deeper than a single row.
"""

import logging
import threading
from fractions import Fraction
from typing import Callable, Dict, Optional, Tuple

from pary_md.errors import NonIntegerSum, RecurrenceConflict, RowSumMismatch
from pary_md.exact import binomial, check_arity, decreasing_count, falling, labeled_tree_count

logger = logging.getLogger(__name__)

FAMILIES = ("y", "f", "t")


class CountTable:
    """Memo of (n, k) -> count for one family and one arity.

    Entries are write-once: writing a different value for an existing key is
    an error, writing the same value again is a no-op. Reads need no lock.
    """

    def __init__(self, family: str, p: int):
        """Initialize an empty table.

        Args:
            family: One of "y", "f", "t"
            p: Arity the values belong to
        """
        if family not in FAMILIES:
            raise ValueError(f"unknown family {family!r}, expected one of {FAMILIES}")
        check_arity(p)
        self.family = family
        self.p = p
        self.memo: Dict[Tuple[int, int], int] = {}
        self.rows_filled = -1
        self.lock = threading.RLock()

    def get(self, n: int, k: int) -> Optional[int]:
        return self.memo.get((n, k))

    def put(self, n: int, k: int, value: int) -> None:
        with self.lock:
            existing = self.memo.get((n, k))
            if existing is not None and existing != value:
                raise ValueError(
                    f"{self.family}({n},{k}) for p={self.p} already holds {existing}, refusing {value}"
                )
            self.memo[(n, k)] = value

    def __contains__(self, key: Tuple[int, int]) -> bool:
        return key in self.memo

    def __len__(self) -> int:
        return len(self.memo)


_tables: Dict[Tuple[str, int], CountTable] = {}
_tables_lock = threading.Lock()


def get_table(family: str, p: int) -> CountTable:
    """Shared memo table for (family, p), created on first use."""
    with _tables_lock:
        table = _tables.get((family, p))
        if table is None:
            table = _tables[(family, p)] = CountTable(family, p)
        return table


def clear_tables() -> None:
    """Drop every memo table."""
    with _tables_lock:
        _tables.clear()


def _in_y_zero_region(p: int, n: int, k: int) -> bool:
    # y(n,k) = 0 iff k < max((n-1)/p, 1), i.e. k < 1 or pk < n-1 (n >= 1)
    return k < 1 or p * k < n - 1


def _y_lookup(table: CountTable, n: int, k: int) -> int:
    if n < 0 or k < 0 or k > n:
        return 0
    return table.memo[(n, k)]


def _y_entry(table: CountTable, p: int, n: int, k: int) -> int:
    if n == 0:
        return 1 if k == 0 else 0
    if k == n:
        return decreasing_count(p, n)

    total = 0
    for m in range(p + 1):
        factor = _y_lookup(table, n - m - 1, k - 1)
        if factor == 0:
            continue
        multiplier = (k - 1) * p - n + m + 2
        if multiplier < 0:
            raise RecurrenceConflict(
                f"y recursion for p={p}, n={n}, k={k}: term m={m} has multiplier {multiplier} "
                f"against non-zero y({n - m - 1},{k - 1}) = {factor}"
            )
        total += binomial(n - 1, m) * falling(p, m) * multiplier * factor

    if _in_y_zero_region(p, n, k):
        if total != 0:
            raise RecurrenceConflict(
                f"y recursion gives {total} for p={p}, n={n}, k={k}, inside the zero region"
            )
        return 0
    return total


def _fill_y(table: CountTable, p: int, n: int) -> None:
    with table.lock:
        start = table.rows_filled + 1
        if start > n:
            return
        for row in range(start, n + 1):
            for k in range(row + 1):
                table.put(row, k, _y_entry(table, p, row, k))
            table.rows_filled = row
        logger.info(f"Filled y table for p={p} rows {start}..{n}")


def count_y(p: int, n: int, k: int) -> int:
    """y(n,k): decreasing trees on k vertices with n-k increasing leaves attached.

    Args:
        p: Arity (>= 2)
        n: Number of vertices
        k: Size of the maximal decreasing subtree

    Returns:
        The exact count; 0 outside 0 <= k <= n and inside the zero region

    Raises:
        InvalidArity: If p < 2
        RecurrenceConflict: If the recursion contradicts its boundary conditions
    """
    check_arity(p)
    if n < 0 or k < 0 or k > n:
        return 0
    table = get_table("y", p)
    if (n, k) not in table:
        _fill_y(table, p, n)
    return table.memo[(n, k)]


def count_f(p: int, n: int, k: int) -> int:
    """f(n,k): unordered forests of k p-ary trees on [n]."""
    check_arity(p)
    if n < 0 or k < 0 or k > n:
        return 0
    if k == n:
        return 1
    table = get_table("f", p)
    cached = table.get(n, k)
    if cached is not None:
        return cached
    # empty product when k = n-1
    value = binomial(n, k) * p * k * falling(p * n - 1, n - k - 1)
    table.put(n, k, value)
    return value


def count_t(p: int, n: int, k: int) -> int:
    """t(n,k): trees of T^(p)_n whose maximal decreasing subtree has k vertices.

    For 1 <= k < n this sums C(n,m) (m-k)/(n-k) (pn-pk)_(n-m) y(m,k) over
    k <= m <= n in exact rationals and checks the total is an integer.

    Raises:
        InvalidArity: If p < 2
        NonIntegerSum: If the sum is not integral
    """
    check_arity(p)
    if n < 0 or k < 0 or k > n:
        return 0
    if n == 0:
        return 1
    if k == 0:
        return 0
    if k == n:
        return decreasing_count(p, n)

    table = get_table("t", p)
    cached = table.get(n, k)
    if cached is not None:
        return cached

    total = Fraction(0)
    for m in range(k + 1, n + 1):
        y = count_y(p, m, k)
        if y == 0:
            continue
        total += binomial(n, m) * Fraction(m - k, n - k) * falling(p * n - p * k, n - m) * y
    if total.denominator != 1:
        raise NonIntegerSum(f"t({n},{k}) for p={p} evaluates to the non-integer {total}")
    table.put(n, k, total.numerator)
    return total.numerator


COUNTERS: Dict[str, Callable[[int, int, int], int]] = {
    "y": count_y,
    "f": count_f,
    "t": count_t,
}


def count(family: str, p: int, n: int, k: int) -> int:
    """Dispatch to count_y, count_f or count_t by family tag."""
    try:
        counter = COUNTERS[family]
    except KeyError:
        raise ValueError(f"unknown family {family!r}, expected one of {FAMILIES}") from None
    return counter(p, n, k)


def t_row(p: int, n: int) -> Dict[int, int]:
    """Row {k: t(n,k)} for 0 <= k <= n, checked against |T^(p)_n|."""
    check_arity(p)
    row = {k: count_t(p, n, k) for k in range(n + 1)}
    expected = labeled_tree_count(p, n)
    got = sum(row.values())
    if got != expected:
        raise RowSumMismatch(p, n, got, expected)
    return row


def y_row(p: int, n: int) -> Dict[int, int]:
    check_arity(p)
    return {k: count_y(p, n, k) for k in range(n + 1)}


def f_row(p: int, n: int) -> Dict[int, int]:
    check_arity(p)
    return {k: count_f(p, n, k) for k in range(n + 1)}


ROWS: Dict[str, Callable[[int, int], Dict[int, int]]] = {
    "y": y_row,
    "f": f_row,
    "t": t_row,
}

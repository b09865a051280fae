#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""Tests for the y, f and t counting formulas."""

import csv

import pytest

from pary_md import count as count_module
from pary_md.count import (
    CountTable,
    clear_tables,
    count,
    count_f,
    count_t,
    count_y,
    f_row,
    get_table,
    t_row,
    y_row,
)
from pary_md.errors import InvalidArity, RecurrenceConflict
from pary_md.exact import decreasing_count, labeled_tree_count


def _read_table(path):
    with open(path, newline="") as handle:
        rows = list(csv.reader(handle))
    return [[int(cell) for cell in row] for row in rows[1:]]


def test_binary_y_table_values(fixtures_dir):
    for row in _read_table(fixtures_dir / "table_y_p2.csv"):
        n, values = row[0], row[1:]
        assert [count_y(2, n, k) for k in range(n + 1)] == values


def test_binary_t_table_values(fixtures_dir):
    for row in _read_table(fixtures_dir / "table_t_p2.csv"):
        n, values, row_sum = row[0], row[1:-1], row[-1]
        assert [count_t(2, n, k) for k in range(n + 1)] == values
        assert sum(values) == row_sum == labeled_tree_count(2, n)


def test_count_y_examples():
    assert count_y(2, 3, 2) == 10
    assert count_y(2, 9, 4) == 35840
    assert count_y(2, 10, 5) == 2251008
    assert count_y(2, 0, 0) == 1
    assert count_y(3, 3, 3) == 15


def test_count_y_out_of_range_is_zero():
    assert count_y(2, -1, 0) == 0
    assert count_y(2, 3, -1) == 0
    assert count_y(2, 3, 4) == 0
    assert count_y(2, 5, 0) == 0


def test_count_f_examples():
    assert count_f(2, 3, 1) == 30
    assert count_f(2, 4, 4) == 1
    assert count_f(2, 5, 0) == 0
    assert count_f(2, 4, 2) == 168
    assert count_f(2, 0, 0) == 1
    assert count_f(2, 4, 5) == 0
    # k = n - 1: the product is empty
    assert count_f(3, 4, 3) == 4 * 3 * 3


def test_count_t_examples():
    assert count_t(2, 3, 1) == 14
    assert count_t(2, 8, 4) == 4386304
    assert count_t(2, 8, 1) == 24984960
    assert count_t(2, 5, 5) == 120
    assert count_t(2, 0, 0) == 1
    assert count_t(2, 4, 0) == 0
    assert count_t(2, 4, 5) == 0


@pytest.mark.parametrize("fn", [count_y, count_f, count_t])
def test_invalid_arity(fn):
    with pytest.raises(InvalidArity):
        fn(1, 3, 1)


def test_t_row_examples():
    assert t_row(2, 4) == {0: 0, 1: 152, 2: 104, 3: 56, 4: 24}
    assert t_row(2, 1) == {0: 0, 1: 1}
    assert sum(t_row(2, 9).values()) == labeled_tree_count(2, 9)


def test_y_and_f_rows():
    assert y_row(2, 4) == {0: 0, 1: 0, 2: 24, 3: 56, 4: 24}
    assert f_row(2, 2) == {0: 0, 1: 4, 2: 1}


@pytest.mark.parametrize("p", [2, 3, 4, 5])
@pytest.mark.parametrize("n", range(13))
def test_row_sum_identity(p, n):
    assert sum(count_t(p, n, k) for k in range(n + 1)) == labeled_tree_count(p, n)


@pytest.mark.parametrize("p", [2, 3, 4, 5])
@pytest.mark.parametrize("n", range(13))
def test_diagonal_and_single_component(p, n):
    assert count_t(p, n, n) == count_y(p, n, n) == decreasing_count(p, n)
    if n >= 1:
        assert count_f(p, n, 1) == labeled_tree_count(p, n)


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("n", range(13))
def test_zero_staircase_holds_for_y_only(p, n):
    for k in range(1, n + 1):
        if p * k < n - 1:
            assert count_y(p, n, k) == 0
        # every MD size 1..n occurs among the trees of T_n
        assert count_t(p, n, k) > 0


def test_t_is_non_zero_below_the_y_staircase():
    assert count_y(2, 4, 1) == 0
    assert count_t(2, 4, 1) == 152
    assert count_y(2, 6, 2) == 0
    assert count_t(2, 6, 1) == 41760
    assert count_t(2, 6, 2) == 27744
    assert count_t(2, 8, 1) == 24984960


def test_count_dispatch():
    assert count("t", 2, 8, 8) == 40320
    assert count("y", 2, 10, 5) == 2251008
    value = count("t", 4, 12, 6)
    assert value > 0
    assert sum(count("t", 4, 12, k) for k in range(13)) == labeled_tree_count(4, 12)
    with pytest.raises(ValueError):
        count("z", 2, 3, 1)


def test_cached_and_fresh_values_agree():
    cached = [count_t(3, 9, k) for k in range(10)]
    clear_tables()
    assert [count_t(3, 9, k) for k in range(10)] == cached


def test_memo_entries_are_write_once():
    table = CountTable("y", 2)
    table.put(3, 2, 10)
    table.put(3, 2, 10)
    with pytest.raises(ValueError):
        table.put(3, 2, 11)
    with pytest.raises(ValueError):
        CountTable("q", 2)


def test_y_table_holds_decreasing_counts_on_diagonal():
    count_y(3, 8, 1)
    table = get_table("y", 3)
    assert table.rows_filled >= 8
    for n in range(9):
        assert table.get(n, n) == decreasing_count(3, n)


def test_large_n_does_not_recurse():
    assert sum(count_t(2, 60, k) for k in range(61)) == labeled_tree_count(2, 60)


def test_recurrence_conflict_is_flagged(monkeypatch):
    clear_tables()
    # pretend the boundary says y(4,2) vanishes for p=2; the recursion disagrees
    monkeypatch.setattr(count_module, "_in_y_zero_region", lambda p, n, k: (n, k) == (4, 2))
    with pytest.raises(RecurrenceConflict):
        count_y(2, 4, 2)
    monkeypatch.undo()
    clear_tables()
    assert count_y(2, 4, 2) == 24

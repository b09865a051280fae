#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Exhaustive generation of p-ary labeled trees and forests.

This is the brute-force oracle the counting formulas are checked against, so
it shares no arithmetic with the count module. A tree on a label set is built
by picking any label as the root and distributing the remaining labels over
the p ordered slots, then recursing into every slot. Each tree arises from
exactly one such choice, which makes the streams duplicate-free by
construction. All streams are lazy generators.
"""

import itertools
import logging
import os
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from pary_md.errors import BudgetExceeded
from pary_md.exact import check_arity, labeled_tree_count
from pary_md.tree_model import Forest, PAryTree, Vertex, is_y_tree, md_size

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 10 ** 8
BUDGET_ENV_VAR = "PARY_MD_BUDGET"


def default_budget() -> int:
    """Budget from PARY_MD_BUDGET, falling back to DEFAULT_BUDGET."""
    raw = os.getenv(BUDGET_ENV_VAR)
    if raw is None or not raw.strip():
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError:
        logger.warning(f"Ignoring non-integer {BUDGET_ENV_VAR}={raw!r}, using {DEFAULT_BUDGET}")
        return DEFAULT_BUDGET
    if value < 1:
        logger.warning(f"Ignoring non-positive {BUDGET_ENV_VAR}={value}, using {DEFAULT_BUDGET}")
        return DEFAULT_BUDGET
    return value


class EnumerationBudget:
    """Caps the number of objects an enumeration may generate.

    One budget can be shared by several streams, including streams consumed
    on different threads; the counter is guarded by a lock.
    """

    def __init__(self, max_trees: Optional[int] = None):
        """Initialize the budget.

        Args:
            max_trees: Cap on generated objects (None reads PARY_MD_BUDGET or the default)
        """
        self.max_trees = default_budget() if max_trees is None else max_trees
        if self.max_trees < 1:
            raise ValueError(f"budget must be positive, got {self.max_trees}")
        self._generated = 0
        self._lock = threading.Lock()

    @property
    def generated(self) -> int:
        return self._generated

    @property
    def remaining(self) -> int:
        return max(self.max_trees - self._generated, 0)

    def charge(self, count: int = 1) -> None:
        """Record ``count`` generated objects; raise BudgetExceeded past the cap."""
        with self._lock:
            self._generated += count
            if self._generated > self.max_trees:
                raise BudgetExceeded(self.max_trees)


@dataclass
class MdHistogram:
    """Distribution of MD-subtree sizes over all trees of T^(p)_n."""

    p: int
    n: int
    counts: Dict[int, int] = field(default_factory=dict)

    def total(self) -> int:
        return sum(self.counts.values())

    def expected_total(self) -> int:
        return labeled_tree_count(self.p, self.n)

    def merge(self, other: "MdHistogram") -> "MdHistogram":
        """Add another histogram over the same (p, n); the operation is associative."""
        if (other.p, other.n) != (self.p, self.n):
            raise ValueError(f"cannot merge histograms for {(self.p, self.n)} and {(other.p, other.n)}")
        merged = dict(self.counts)
        for k, value in other.counts.items():
            merged[k] = merged.get(k, 0) + value
        return MdHistogram(self.p, self.n, dict(sorted(merged.items())))


def _check_labels(labels: Iterable[int]) -> Tuple[int, ...]:
    ordered = tuple(labels)
    if len(set(ordered)) != len(ordered):
        raise ValueError(f"labels must be distinct, got {ordered}")
    return ordered


def _distributions(labels: Sequence[int], parts: int) -> Iterator[List[Tuple[int, ...]]]:
    """Every way of splitting ``labels`` into ``parts`` ordered groups, order kept within groups."""
    for assignment in itertools.product(range(parts), repeat=len(labels)):
        groups: List[List[int]] = [[] for _ in range(parts)]
        for label, part in zip(labels, assignment):
            groups[part].append(label)
        yield [tuple(group) for group in groups]


def _trees_on(p: int, labels: Tuple[int, ...]) -> Iterator[Optional[Vertex]]:
    if not labels:
        yield None
        return
    for index, root in enumerate(labels):
        yield from _trees_with_root(p, root, labels[:index] + labels[index + 1:])


def _trees_with_root(p: int, root: int, rest: Tuple[int, ...]) -> Iterator[Vertex]:
    for groups in _distributions(rest, p):
        for slots in _fillings(p, groups, 0):
            yield Vertex(root, slots)


def _fillings(p: int, groups: List[Tuple[int, ...]], index: int) -> Iterator[Tuple[Optional[Vertex], ...]]:
    """Every tuple of subtrees with subtree i built on groups[i]."""
    if index == len(groups):
        yield ()
        return
    for subtree in _trees_on(p, groups[index]):
        for tail in _fillings(p, groups, index + 1):
            yield (subtree,) + tail


def _component_fillings(
    p: int, roots: Tuple[int, ...], groups: List[Tuple[int, ...]], index: int
) -> Iterator[Tuple[Vertex, ...]]:
    if index == len(roots):
        yield ()
        return
    for component in _trees_with_root(p, roots[index], groups[index]):
        for tail in _component_fillings(p, roots, groups, index + 1):
            yield (component,) + tail


def enumerate_trees(
    p: int, labels: Iterable[int], budget: Optional[EnumerationBudget] = None
) -> Iterator[PAryTree]:
    """Yield every p-ary labeled tree on ``labels`` exactly once, in a fixed order.

    The empty label set yields the empty tree.
    """
    check_arity(p)
    ordered = _check_labels(labels)
    budget = EnumerationBudget() if budget is None else budget
    for root in _trees_on(p, ordered):
        budget.charge()
        yield PAryTree(p, root)


def enumerate_trees_with_root(
    p: int, root: int, rest: Iterable[int], budget: Optional[EnumerationBudget] = None
) -> Iterator[PAryTree]:
    """Yield every tree on {root} + rest whose root is ``root``; one shard of enumerate_trees."""
    check_arity(p)
    ordered = _check_labels(rest)
    if root in ordered:
        raise ValueError(f"root {root} also appears among the other labels")
    budget = EnumerationBudget() if budget is None else budget
    for tree_root in _trees_with_root(p, root, ordered):
        budget.charge()
        yield PAryTree(p, tree_root)


def enumerate_forests(
    p: int, labels: Iterable[int], k: int, budget: Optional[EnumerationBudget] = None
) -> Iterator[Forest]:
    """Yield every forest of k p-ary trees on ``labels`` exactly once.

    The root set is chosen first as a sorted k-subset, so forests differing
    only in the order of their components are generated once.
    """
    check_arity(p)
    ordered = tuple(sorted(_check_labels(labels)))
    if k < 0 or k > len(ordered):
        raise ValueError(f"k must lie in [0, {len(ordered)}], got {k}")
    budget = EnumerationBudget() if budget is None else budget

    for roots in itertools.combinations(ordered, k):
        root_set = set(roots)
        others = tuple(label for label in ordered if label not in root_set)
        for groups in _distributions(others, k):
            for components in _component_fillings(p, roots, groups, 0):
                budget.charge()
                yield Forest.from_roots(p, components)


def _histogram_shard(
    p: int, n: int, root: int, budget: EnumerationBudget, y_only: bool
) -> Dict[int, int]:
    rest = tuple(label for label in range(1, n + 1) if label != root)
    counts: Dict[int, int] = {}
    for tree in enumerate_trees_with_root(p, root, rest, budget):
        if y_only and not is_y_tree(tree):
            continue
        k = md_size(tree)
        counts[k] = counts.get(k, 0) + 1
    return counts


def _sharded_histogram(
    p: int, n: int, budget: Optional[EnumerationBudget], workers: int, y_only: bool
) -> MdHistogram:
    check_arity(p)
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    budget = EnumerationBudget() if budget is None else budget
    if n == 0:
        budget.charge()
        return MdHistogram(p, 0, {0: 1})

    roots = list(range(1, n + 1))
    if workers > 1:
        logger.info(f"Enumerating T^({p})_{n} over {len(roots)} root shards on {workers} threads")
        with ThreadPoolExecutor(max_workers=workers) as pool:
            shards = list(pool.map(lambda r: _histogram_shard(p, n, r, budget, y_only), roots))
    else:
        shards = [_histogram_shard(p, n, r, budget, y_only) for r in roots]

    histogram = MdHistogram(p, n, {k: 0 for k in range(1, n + 1)})
    for shard in shards:
        histogram = histogram.merge(MdHistogram(p, n, shard))
    logger.info(f"Enumerated {budget.generated} objects so far; histogram for p={p}, n={n} done")
    return histogram


def md_histogram(
    p: int, n: int, budget: Optional[EnumerationBudget] = None, workers: int = 1
) -> MdHistogram:
    """Count the trees of T^(p)_n by MD-subtree size, by exhaustive enumeration.

    Args:
        p: Arity
        n: Number of vertices; n = 0 gives {0: 1}
        budget: Shared generation cap (a fresh default budget when None)
        workers: Threads used for the per-root shards

    Returns:
        Histogram with an entry for every k in [1, n]
    """
    return _sharded_histogram(p, n, budget, workers, y_only=False)


def y_histogram(
    p: int, n: int, budget: Optional[EnumerationBudget] = None, workers: int = 1
) -> MdHistogram:
    """Like md_histogram, restricted to trees whose non-MD vertices are all leaves."""
    return _sharded_histogram(p, n, budget, workers, y_only=True)


def y_oracle(p: int, n: int, k: int, budget: Optional[EnumerationBudget] = None) -> int:
    """Brute-force y(n,k): trees of T^(p)_n with MD size k and only leaves outside the MD subtree."""
    if k < 0 or k > n:
        raise ValueError(f"k must lie in [0, {n}], got {k}")
    return y_histogram(p, n, budget).counts.get(k, 0)


def forest_histogram(p: int, n: int, budget: Optional[EnumerationBudget] = None) -> Dict[int, int]:
    """Number of forests on [n] with k components, for every k in [0, n]."""
    budget = EnumerationBudget() if budget is None else budget
    labels = list(range(1, n + 1))
    return {k: sum(1 for _ in enumerate_forests(p, labels, k, budget)) for k in range(n + 1)}

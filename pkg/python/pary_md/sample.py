#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Uniform random p-ary labeled trees and a chi-square check of the MD-size law.

A tree is drawn as a uniform shape followed by a uniform labeling; every
shape on n vertices has exactly n! labelings, so the pair is uniform over
T^(p)_n. The shape comes from the cycle lemma: a random arrangement of n
internal and (p-1)n+1 external symbols is rotated to its unique Lukasiewicz
rotation, which is the preorder word of a full p-ary tree.

Randomness comes from numpy's Generator. Sampling runs are split into
fixed-size shards whose seeds are spawned from one SeedSequence, so a report
depends on (p, n, trials, seed) only and not on how many threads ran it.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np
from scipy import stats

from pary_md.count import count_t
from pary_md.exact import check_arity, labeled_tree_count
from pary_md.tree_model import PAryTree, Vertex, md_size

logger = logging.getLogger(__name__)

SEED_MODULUS = 2 ** 64
SIGNIFICANCE = 0.001
DEFAULT_SHARD_SIZE = 10_000


@dataclass
class SampleReport:
    """Observed MD sizes of sampled trees against the exact t(n,k) distribution."""

    p: int
    n: int
    trials: int
    seed: int
    observed: Dict[int, int]
    weights: Dict[int, int]
    population: int
    chi_square: float = 0.0
    df: int = 0
    p_value: Optional[float] = None
    critical_value: Optional[float] = None
    shards: int = field(default=1)

    @property
    def expected(self) -> Dict[int, Fraction]:
        """Exact probabilities t(n,k) / |T^(p)_n|."""
        return {k: Fraction(w, self.population) for k, w in self.weights.items()}

    def expected_text(self) -> Dict[int, str]:
        """Probabilities as unreduced ``t/total`` strings."""
        return {k: f"{w}/{self.population}" for k, w in self.weights.items()}

    @property
    def passed(self) -> bool:
        if math.isinf(self.chi_square):
            return False
        if self.critical_value is None:
            return True
        return self.chi_square < self.critical_value


def _seed_sequence(seed: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(seed % SEED_MODULUS)


def _shape_word(p: int, n: int, rng: np.random.Generator) -> List[bool]:
    """Preorder word of a uniform full p-ary tree with n internal nodes (True = internal)."""
    length = p * n + 1
    word = [False] * length
    for position in rng.choice(length, size=n, replace=False):
        word[int(position)] = True

    # internal symbols weigh p-1, external ones -1; the total is -1, so exactly
    # one rotation keeps every proper prefix non-negative
    running = 0
    lowest = 0
    cut = 0
    for index, internal in enumerate(word, start=1):
        running += (p - 1) if internal else -1
        if running < lowest:
            lowest = running
            cut = index
    return word[cut:] + word[:cut]


def _decode_word(word: List[bool], p: int, labels: List[int]) -> Optional[Vertex]:
    """Build the tree of a preorder word, giving internal vertices ``labels`` in preorder."""
    open_vertices: List[Tuple[int, List[Optional[Vertex]]]] = []
    next_label = 0
    for position, internal in enumerate(word):
        if internal:
            open_vertices.append((labels[next_label], []))
            next_label += 1
            continue
        done: Optional[Vertex] = None
        while open_vertices:
            label, slots = open_vertices[-1]
            slots.append(done)
            if len(slots) < p:
                break
            open_vertices.pop()
            done = Vertex(label, tuple(slots))
        else:
            assert position == len(word) - 1, "shape word not fully consumed"
            return done
    raise AssertionError("shape word ended inside an unfinished vertex")


def draw_tree(p: int, n: int, rng: np.random.Generator) -> PAryTree:
    """Draw one uniform tree of T^(p)_n from an existing generator."""
    word = _shape_word(p, n, rng)
    labels = [int(label) + 1 for label in rng.permutation(n)]
    return PAryTree(p, _decode_word(word, p, labels))


def sample_tree(p: int, n: int, seed: int) -> PAryTree:
    """Uniform random member of T^(p)_n, fully determined by the seed.

    Args:
        p: Arity (>= 2)
        n: Number of vertices
        seed: 64-bit seed; other integers are reduced modulo 2**64

    Returns:
        A tree on the labels 1..n
    """
    check_arity(p)
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    return draw_tree(p, n, np.random.default_rng(_seed_sequence(seed)))


def sample_trees(p: int, n: int, count: int, seed: int) -> Iterator[PAryTree]:
    """Deterministic stream of ``count`` independent uniform trees from one generator."""
    check_arity(p)
    rng = np.random.default_rng(_seed_sequence(seed))
    for _ in range(count):
        yield draw_tree(p, n, rng)


def _run_shard(p: int, n: int, trials: int, seed_seq: np.random.SeedSequence) -> Dict[int, int]:
    rng = np.random.default_rng(seed_seq)
    counts: Dict[int, int] = {}
    for _ in range(trials):
        k = md_size(draw_tree(p, n, rng))
        counts[k] = counts.get(k, 0) + 1
    return counts


def _chi_square(observed: Dict[int, int], weights: Dict[int, int], population: int,
                trials: int) -> Tuple[float, int, Optional[float], Optional[float]]:
    categories = [k for k, w in weights.items() if w > 0]
    stray = [k for k, c in observed.items() if c and weights.get(k, 0) == 0]
    if stray:
        logger.warning(f"Observed MD sizes {stray} that have zero probability")
        return float("inf"), len(categories) - 1, 0.0, None
    df = len(categories) - 1
    if df == 0:
        return 0.0, 0, 1.0, None
    f_obs = np.array([observed.get(k, 0) for k in categories], dtype=float)
    f_exp = np.array([trials * weights[k] / population for k in categories], dtype=float)
    result = stats.chisquare(f_obs, f_exp)
    critical = float(stats.chi2.ppf(1.0 - SIGNIFICANCE, df))
    return float(result.statistic), df, float(result.pvalue), critical


def sample_md_distribution(
    p: int,
    n: int,
    trials: int,
    seed: int,
    workers: int = 1,
    shard_size: int = DEFAULT_SHARD_SIZE,
) -> SampleReport:
    """Sample ``trials`` trees and compare their MD sizes with t(n,k) / |T^(p)_n|.

    Args:
        p: Arity (>= 2)
        n: Number of vertices (>= 1)
        trials: Number of trees to draw (>= 1)
        seed: Master seed
        workers: Threads to spread the shards over
        shard_size: Trials per shard

    Returns:
        The report, including the chi-square statistic and its 0.999 critical value
    """
    check_arity(p)
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials}")

    weights = {k: count_t(p, n, k) for k in range(1, n + 1)}
    population = labeled_tree_count(p, n)
    assert sum(Fraction(w, population) for w in weights.values()) == 1, "t(n,k) row does not sum to |T_n|"

    sizes = [shard_size] * (trials // shard_size)
    if trials % shard_size:
        sizes.append(trials % shard_size)
    seeds = _seed_sequence(seed).spawn(len(sizes))

    if workers > 1 and len(sizes) > 1:
        logger.info(f"Sampling {trials} trees in {len(sizes)} shards on {workers} threads")
        with ThreadPoolExecutor(max_workers=workers) as pool:
            shard_counts = list(pool.map(lambda job: _run_shard(p, n, *job), zip(sizes, seeds)))
    else:
        shard_counts = [_run_shard(p, n, size, seq) for size, seq in zip(sizes, seeds)]

    observed = {k: 0 for k in range(1, n + 1)}
    for counts in shard_counts:
        for k, c in counts.items():
            observed[k] = observed.get(k, 0) + c

    chi_square, df, p_value, critical = _chi_square(observed, weights, population, trials)
    report = SampleReport(
        p=p,
        n=n,
        trials=trials,
        seed=seed,
        observed=observed,
        weights=weights,
        population=population,
        chi_square=chi_square,
        df=df,
        p_value=p_value,
        critical_value=critical,
        shards=len(sizes),
    )
    logger.info(f"Sampled p={p} n={n} trials={trials}: chi-square {chi_square:.4f} on {df} df")
    return report

"""Exhaustive enumeration of G^{N,M} for tiny parameters.

The oracle is deliberately naive.  Graph number ``i`` is ``i`` written in
base ``m`` with one digit per pair: the first pair (lexicographic order) is
the most significant digit, and digit ``d`` means label ``inf`` for ``d = 0``
and ``d + 1`` otherwise.  Counting over an index range therefore splits
cleanly across workers, and the exact integer counts just add up.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np

from .errors import TooLarge
from .graph import DefiningGraph, num_pairs, pair_index_arrays
from .predicates import resolve_predicate

DEFAULT_BUDGET = 2_000_000

_CHUNK = 1 << 15


@dataclass(frozen=True)
class EnumBudget:
    max_graphs: int = DEFAULT_BUDGET


def space_size(n: int, m: int) -> int:
    return m ** num_pairs(n)


def _budget_value(budget) -> int:
    if isinstance(budget, EnumBudget):
        return budget.max_graphs
    return DEFAULT_BUDGET if budget is None else int(budget)


def check_budget(n: int, m: int, budget=None) -> int:
    size = space_size(n, m)
    limit = _budget_value(budget)
    if size > limit:
        raise TooLarge(f"G^({n},{m}) has {size} graphs, over the budget of {limit}")
    return size


def codes_for_range(n: int, m: int, start: int, stop: int) -> np.ndarray:
    """Pair codes of graphs ``start .. stop-1`` in enumeration order."""
    p = num_pairs(n)
    idx = np.arange(start, stop, dtype=np.int64)
    digits = np.empty((len(idx), p), dtype=np.int64)
    for col in range(p - 1, -1, -1):
        digits[:, col] = idx % m
        idx //= m
    return np.where(digits == 0, 0, digits + 1)


def enumerate_graphs(n: int, m: int, budget=None) -> Iterator[DefiningGraph]:
    """Yield every graph of G^{n,m} once, in mixed-radix order."""
    size = check_budget(n, m, budget)
    for lo in range(0, size, _CHUNK):
        for row in codes_for_range(n, m, lo, min(size, lo + _CHUNK)):
            yield DefiningGraph(n, row)


def count_members(predicate: str, n: int, m: int, start: int, stop: int) -> int:
    pred = resolve_predicate(predicate)
    total = 0
    for lo in range(start, stop, _CHUNK):
        codes = codes_for_range(n, m, lo, min(stop, lo + _CHUNK))
        total += int(pred.evaluate_block(codes, n).sum())
    return total


def exact_probability(predicate, n: int, m: int, budget=None, workers: int = 1) -> Fraction:
    """Fraction of G^{n,m} lying in the class, by counting every graph."""
    size = check_budget(n, m, budget)
    name = predicate if isinstance(predicate, str) else predicate.name
    name = resolve_predicate(name).name
    if workers <= 1 or size < 2 * _CHUNK:
        return Fraction(count_members(name, n, m, 0, size), size)
    bounds = np.linspace(0, size, workers + 1).astype(np.int64)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(count_members, name, n, m, int(a), int(b))
            for a, b in zip(bounds[:-1], bounds[1:])
            if b > a
        ]
        hits = sum(f.result() for f in futures)
    return Fraction(hits, size)


def adjacent_two_counts(codes: np.ndarray, n: int) -> np.ndarray:
    """X per graph: ordered triples (v1, v2, v3) with m_{v1v2} = m_{v1v3} = 2."""
    rows, cols = pair_index_arrays(n)
    twos = np.zeros((codes.shape[0], n, n), dtype=bool)
    twos[:, rows, cols] = codes == 2
    twos[:, cols, rows] = codes == 2
    x = np.zeros(codes.shape[0], dtype=np.int64)
    for v1 in range(n):
        for v2 in range(n):
            for v3 in range(n):
                if len({v1, v2, v3}) == 3:
                    x += twos[:, v1, v2] & twos[:, v1, v3]
    return x


@dataclass(frozen=True)
class Moments:
    e_x: Fraction
    e_x2: Fraction
    p_nonzero: Fraction


def moments_by_enumeration(n: int, m: int, budget=None) -> Moments:
    """Exact E[X], E[X^2] and P[X != 0] over the uniform measure on G^{n,m}."""
    size = check_budget(n, m, budget)
    s1 = s2 = nonzero = 0
    for lo in range(0, size, _CHUNK):
        x = adjacent_two_counts(codes_for_range(n, m, lo, min(size, lo + _CHUNK)), n)
        if np.any(x % 2):
            raise AssertionError("X must be even: each adjacent pair is counted twice")
        s1 += int(x.sum())
        s2 += int((x * x).sum())
        nonzero += int((x > 0).sum())
    return Moments(Fraction(s1, size), Fraction(s2, size), Fraction(nonzero, size))

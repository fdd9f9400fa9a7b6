"""Uniform sampling from G^{N,M} and Monte Carlo class-probability estimates.

Random labels come from a stateless, counter-based generator: the label of
pair ``p`` in sample ``s`` under seed ``seed`` is a fixed function of the
triple ``(seed, s, p)``::

    key   = mix64(seed + GAMMA * (s + 1))
    word  = mix64(key + GAMMA * (p + 1))        # all arithmetic mod 2**64
    r     = word % m                            # 0 -> inf, r -> label r + 1

``mix64`` is the SplitMix64 finalizer and ``GAMMA = 0x9E3779B97F4A7C15``.
The modulo reduction is biased by at most ``m / 2**64``; labels are
restricted to ``m < 2**24``, which keeps the bias below ``2**-40``.

Since every sample is addressed by its index, results do not depend on how
the index range is split into chunks or across workers.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from statistics import NormalDist
from typing import Optional, Sequence

import numpy as np

from . import exact
from .errors import BadLabel, BadSamples
from .graph import DefiningGraph, GrowthSpec, num_pairs
from .predicates import Predicate, resolve_predicate

GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MUL1 = np.uint64(0xBF58476D1CE4E5B9)
_MUL2 = np.uint64(0x94D049BB133111EB)
MAX_LABEL = 2**24 - 1

# pair labels generated per block; bounds peak memory of a chunk
_BLOCK_ELEMENTS = 1 << 21


def mix64(z: np.ndarray) -> np.ndarray:
    """SplitMix64 finalizer on a uint64 array (wrapping arithmetic)."""
    z = (z ^ (z >> np.uint64(30))) * _MUL1
    z = (z ^ (z >> np.uint64(27))) * _MUL2
    return z ^ (z >> np.uint64(31))


def _seed_u64(seed: int) -> np.uint64:
    return np.uint64(seed % 2**64)


def sample_codes(seed: int, n: int, m: int, start: int, stop: int) -> np.ndarray:
    """Pair codes of samples ``start .. stop-1`` as a ``(stop-start, P)`` array."""
    if m < 2:
        raise BadLabel(f"maximal label must be at least 2, got {m}")
    if m > MAX_LABEL:
        raise BadLabel(f"maximal label {m} exceeds the sampler limit {MAX_LABEL}")
    p = num_pairs(n)
    with np.errstate(over="ignore"):
        idx = np.arange(start, stop, dtype=np.uint64) + np.uint64(1)
        keys = mix64(_seed_u64(seed) + GAMMA * idx)
        offsets = GAMMA * (np.arange(p, dtype=np.uint64) + np.uint64(1))
        words = mix64(keys[:, None] + offsets[None, :])
    r = (words % np.uint64(m)).astype(np.int64)
    return np.where(r == 0, 0, r + 1)


def sample_graph(seed: int, n: int, m: int, index: int = 0) -> DefiningGraph:
    """The ``index``-th uniform sample from G^{n,m} under ``seed``."""
    return DefiningGraph(n, sample_codes(seed, n, m, index, index + 1)[0])


def wilson_interval(successes: int, samples: int, confidence: float) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if samples < 1:
        raise BadSamples(f"need at least one sample, got {samples}")
    if not 0 < confidence < 1:
        raise ValueError(f"confidence must lie in (0, 1), got {confidence}")
    z = NormalDist().inv_cdf(0.5 + confidence / 2)
    p = successes / samples
    z2n = z * z / samples
    centre = (p + z2n / 2) / (1 + z2n)
    half = z * math.sqrt(p * (1 - p) / samples + z2n / (4 * samples)) / (1 + z2n)
    low = min(p, max(0.0, centre - half))
    high = max(p, min(1.0, centre + half))
    return low, high


@dataclass(frozen=True)
class Estimate:
    predicate: str
    n: int
    m: int
    successes: int
    samples: int
    seed: int
    confidence: float
    ci_low: float
    ci_high: float

    @property
    def p_hat(self) -> float:
        return self.successes / self.samples

    def contains(self, value: float) -> bool:
        return self.ci_low <= value <= self.ci_high

    def to_dict(self) -> dict:
        return {**asdict(self), "p_hat": self.p_hat}


def count_successes(predicate: str, n: int, m: int, seed: int, start: int, stop: int) -> int:
    """Members of ``predicate`` among samples ``start .. stop-1``."""
    pred = resolve_predicate(predicate)
    block = max(1, _BLOCK_ELEMENTS // max(num_pairs(n), 1))
    total = 0
    for lo in range(start, stop, block):
        hi = min(stop, lo + block)
        codes = sample_codes(seed, n, m, lo, hi)
        total += int(pred.evaluate_block(codes, n).sum())
    return total


def default_workers() -> int:
    raw = os.environ.get("ARTIN_RANDLAB_THREADS")
    return max(1, int(raw)) if raw else 1


def _split(samples: int, parts: int) -> list[tuple[int, int]]:
    bounds = np.linspace(0, samples, parts + 1).astype(int)
    return [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


def _pred_name(predicate) -> str:
    if isinstance(predicate, Predicate):
        return predicate.name
    return resolve_predicate(predicate).name


def estimate(
    predicate,
    n: int,
    m: int,
    samples: int,
    seed: int,
    confidence: float = 0.99,
    workers: Optional[int] = None,
) -> Estimate:
    """Estimate P[graph in class] on G^{n,m} from ``samples`` uniform draws.

    ``workers`` > 1 fans disjoint sample-index ranges out to processes and
    sums the success counts; the result is identical for any worker count.
    """
    if isinstance(samples, bool) or not isinstance(samples, int) or samples < 1:
        raise BadSamples(f"need at least one sample, got {samples!r}")
    name = _pred_name(predicate)
    workers = default_workers() if workers is None else max(1, workers)
    if workers == 1:
        successes = count_successes(name, n, m, seed, 0, samples)
    else:
        ranges = _split(samples, workers)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(count_successes, name, n, m, seed, a, b) for a, b in ranges]
            successes = sum(f.result() for f in futures)
    low, high = wilson_interval(successes, samples, confidence)
    return Estimate(name, n, m, successes, samples, seed, confidence, low, high)


@dataclass(frozen=True)
class SweepRow:
    n: int
    m: int
    estimate: Estimate
    exact: Optional[float]
    asymptote: Optional[float]


def sweep(
    growth: GrowthSpec,
    predicate,
    n_values: Sequence[int],
    samples: int,
    seed: int,
    confidence: float = 0.99,
    workers: Optional[int] = None,
) -> list[SweepRow]:
    """One estimate per rank along ``m = growth(n)``, with reference columns.

    Every row uses the same seed; rows differ through ``n`` and ``m``.
    """
    n_values = list(n_values)
    if not n_values:
        raise ValueError("n_values must be non-empty")
    if any(b <= a for a, b in zip(n_values, n_values[1:])):
        raise ValueError("n_values must be strictly ascending")
    pred = resolve_predicate(_pred_name(predicate))
    limit = exact.asymptote(pred, growth)
    rows = []
    for n in n_values:
        m = growth(n)
        est = estimate(pred.name, n, m, samples, seed, confidence, workers)
        closed = exact.closed_form(pred, n, m)
        rows.append(SweepRow(n, m, est, None if closed is None else float(closed), limit))
    return rows

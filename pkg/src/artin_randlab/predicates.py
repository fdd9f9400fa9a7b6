"""Named class predicates, shared by the sampler, the oracle and the CLI.

Names are case-insensitive and treat ``-`` like ``_``.  Besides the base
classes, four composite forms resolve dynamically:

* ``join:<k>`` -- the ``k``-join class, e.g. ``join:2`` or ``join:inf``;
* ``avoid:<labels>`` -- graphs using none of a comma-separated label list,
  e.g. ``avoid:2,3`` or ``avoid:inf`` (``avoid:`` alone is every graph);
* ``not_<name>`` -- complement of any predicate;
* ``<a>&<b>`` -- intersection of predicates.

A predicate may carry a *batch* form that evaluates a whole ``(B, P)`` block
of pair-code rows at once; batch and scalar forms must agree exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from . import classify
from .errors import BadLabel, BadPredicate
from .graph import INF, INF_CODE, DefiningGraph, check_label, pair_index_arrays

ScalarFn = Callable[[DefiningGraph], bool]
BatchFn = Callable[[np.ndarray, int], np.ndarray]


@dataclass(frozen=True)
class Predicate:
    name: str
    scalar: ScalarFn
    batch: Optional[BatchFn] = None
    # labels the class forbids outright, for closed forms
    forbidden: Optional[tuple] = None

    def __call__(self, g: DefiningGraph) -> bool:
        return bool(self.scalar(g))

    def evaluate_block(self, codes: np.ndarray, n: int) -> np.ndarray:
        """Boolean membership for each row of a ``(B, P)`` code block."""
        if self.batch is not None:
            return np.asarray(self.batch(codes, n), dtype=bool)
        return np.fromiter(
            (self.scalar(DefiningGraph(n, row)) for row in codes), dtype=bool, count=len(codes)
        )


def _none_of(values):
    def batch(codes, n):
        return ~np.isin(codes, values).any(axis=1)

    return batch


def _vertex_counts(mask: np.ndarray, n: int) -> np.ndarray:
    """Per-vertex number of incident pairs selected by a ``(B, P)`` mask."""
    rows, cols = pair_index_arrays(n)
    full = np.zeros((mask.shape[0], n, n), dtype=bool)
    full[:, rows, cols] = mask
    full[:, cols, rows] = mask
    return full.sum(axis=2)


def _batch_22_free(codes, n):
    if n < 3:
        return np.ones(len(codes), dtype=bool)
    return (_vertex_counts(codes == 2, n) <= 1).all(axis=1)


def _batch_cone(codes, n):
    if n == 1:
        return np.ones(len(codes), dtype=bool)
    return (_vertex_counts(codes == INF_CODE, n) == 0).any(axis=1)


def _batch_raag(codes, n):
    return np.isin(codes, [INF_CODE, 2]).all(axis=1)


BASE = {
    "connected": Predicate("connected", classify.is_connected),
    "irreducible": Predicate("irreducible", classify.is_irreducible),
    "cone": Predicate("cone", classify.is_cone, _batch_cone),
    "two_two_free": Predicate("two_two_free", classify.is_22_free, _batch_22_free),
    "two_dimensional": Predicate("two_dimensional", classify.is_two_dimensional),
    "fc_type": Predicate("fc_type", classify.is_fc_type),
    "large_type": Predicate("large_type", classify.is_large_type, _none_of([2]), (2,)),
    "extra_large": Predicate("extra_large", classify.is_extra_large, _none_of([2, 3]), (2, 3)),
    "xxl": Predicate("xxl", classify.is_xxl, _none_of([2, 3, 4]), (2, 3, 4)),
    "free_of_infinity": Predicate(
        "free_of_infinity", classify.is_free_of_infinity, _none_of([INF_CODE]), (INF,)
    ),
    "raag": Predicate("raag", classify.is_raag, _batch_raag),
    "triangle_free": Predicate("triangle_free", classify.is_triangle_free),
    "spherical": Predicate("spherical", classify.is_spherical),
}

ALIASES = {
    "22free": "two_two_free",
    "22_free": "two_two_free",
    "2dim": "two_dimensional",
    "2_dim": "two_dimensional",
    "2_dimensional": "two_dimensional",
    "fc": "fc_type",
    "large": "large_type",
    "extra_large_type": "extra_large",
    "xl": "extra_large",
    "xxl_type": "xxl",
    "infinity_free": "free_of_infinity",
}


def _normalize(name: str) -> str:
    return name.strip().lower().replace("-", "_")


def _join(k_text: str) -> Predicate:
    try:
        k = check_label(float("inf") if k_text == "inf" else int(k_text))
    except (ValueError, BadLabel):
        raise BadPredicate(f"bad join label {k_text!r}") from None
    name = f"join:{'inf' if k == INF else k}"

    def scalar(g):
        return g.n >= 2 and classify.is_k_join(g, k)

    return Predicate(name, scalar)


def _avoid(text: str) -> Predicate:
    labels = []
    for part in filter(None, text.split(",")):
        try:
            labels.append(check_label(float("inf") if part == "inf" else int(part)))
        except (ValueError, BadLabel):
            raise BadPredicate(f"bad label {part!r} in avoid list") from None
    labels = tuple(sorted(set(labels)))
    codes = [0 if lab == INF else lab for lab in labels]

    def scalar(g):
        return not np.isin(g.codes, codes).any()

    name = "avoid:" + ",".join("inf" if lab == INF else str(lab) for lab in labels)
    return Predicate(name, scalar, _none_of(codes), labels)


def _negate(p: Predicate) -> Predicate:
    batch = None
    if p.batch is not None:
        def batch(codes, n):
            return ~p.evaluate_block(codes, n)

    return Predicate(f"not_{p.name}", lambda g: not p.scalar(g), batch)


def _conjoin(parts: list[Predicate]) -> Predicate:
    batch = None
    if all(p.batch is not None for p in parts):
        def batch(codes, n):
            out = np.ones(len(codes), dtype=bool)
            for p in parts:
                out &= p.evaluate_block(codes, n)
            return out

    return Predicate(
        "&".join(p.name for p in parts),
        lambda g: all(p.scalar(g) for p in parts),
        batch,
    )


@lru_cache(maxsize=None)
def resolve_predicate(name: str) -> Predicate:
    """Look up a predicate by name; raises :class:`BadPredicate` if unknown."""
    key = _normalize(name)
    if "&" in key:
        return _conjoin([resolve_predicate(part) for part in key.split("&")])
    if key.startswith("join:"):
        return _join(key[len("join:"):])
    if key.startswith("avoid:"):
        return _avoid(key[len("avoid:"):])
    key = ALIASES.get(key, key)
    if key in BASE:
        return BASE[key]
    if key.startswith("not_"):
        return _negate(resolve_predicate(key[len("not_"):]))
    raise BadPredicate(f"unknown predicate {name!r}; known: {', '.join(sorted(BASE))}")


def predicate_names() -> list[str]:
    return sorted(BASE)

"""Labeled defining graphs, the sample space G^{N,M} and growth functions.

A label is either a finite integer >= 2 or ``math.inf`` (no edge).  Inside a
:class:`DefiningGraph` labels are stored as integer codes where ``0`` stands
for infinity, which keeps every graph a plain numpy array underneath.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Union

import numpy as np

from .errors import BadGrowth, BadLabel, BadVertex, DuplicateEdge, ParseError

INF = math.inf
INF_CODE = 0

Label = Union[int, float]


def check_label(label) -> Label:
    """Return ``label`` if it is a valid label, else raise :class:`BadLabel`."""
    if isinstance(label, bool):
        raise BadLabel(f"label must be an integer >= 2 or inf, got {label!r}")
    if isinstance(label, (int, np.integer)):
        if label < 2:
            raise BadLabel(f"finite labels start at 2, got {label}")
        return int(label)
    if isinstance(label, float) and label == INF:
        return INF
    raise BadLabel(f"label must be an integer >= 2 or inf, got {label!r}")


def label_to_code(label) -> int:
    label = check_label(label)
    return INF_CODE if label == INF else label


def code_to_label(code: int) -> Label:
    return INF if code == INF_CODE else int(code)


def num_pairs(n: int) -> int:
    return n * (n - 1) // 2


@lru_cache(maxsize=None)
def pair_index_arrays(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Row/column indices of the pairs ``i < j`` in lexicographic order."""
    rows, cols = np.triu_indices(n, 1)
    rows.setflags(write=False)
    cols.setflags(write=False)
    return rows, cols


def pair_index(n: int, i: int, j: int) -> int:
    """Position of the pair ``{i, j}`` (``i < j``) in lexicographic order."""
    return i * (2 * n - i - 1) // 2 + (j - i - 1)


class DefiningGraph:
    """An immutable rank-``n`` graph with a label on every vertex pair.

    Parameters
    ----------
    n : int
        Number of vertices (the rank), at least 1.
    codes : array-like of int
        Label codes for the ``n(n-1)/2`` pairs in lexicographic ``(i, j)``
        order; ``0`` encodes infinity, anything else is the finite label.

    Most callers should use :func:`new_graph` instead, which validates
    explicit ``(i, j, label)`` assignments.
    """

    __slots__ = ("_n", "_codes", "_matrix", "_hash")

    def __init__(self, n: int, codes=None):
        if n < 1:
            raise BadVertex(f"rank must be at least 1, got {n}")
        p = num_pairs(n)
        if codes is None:
            arr = np.zeros(p, dtype=np.int64)
        else:
            arr = np.array(codes, dtype=np.int64).reshape(-1)
            if arr.shape[0] != p:
                raise BadVertex(f"expected {p} pair labels for n={n}, got {arr.shape[0]}")
            if np.any((arr != INF_CODE) & (arr < 2)):
                bad = arr[(arr != INF_CODE) & (arr < 2)][0]
                raise BadLabel(f"finite labels start at 2, got {bad}")
        arr.setflags(write=False)
        self._n = n
        self._codes = arr
        self._matrix = None
        self._hash = None

    @property
    def n(self) -> int:
        return self._n

    @property
    def codes(self) -> np.ndarray:
        """Read-only pair-code vector (``0`` = infinity)."""
        return self._codes

    @property
    def matrix(self) -> np.ndarray:
        """Read-only symmetric ``n x n`` code matrix with zero diagonal."""
        if self._matrix is None:
            mat = np.zeros((self._n, self._n), dtype=np.int64)
            rows, cols = pair_index_arrays(self._n)
            mat[rows, cols] = self._codes
            mat[cols, rows] = self._codes
            mat.setflags(write=False)
            self._matrix = mat
        return self._matrix

    def label(self, i: int, j: int) -> Label:
        """Label on the pair ``{i, j}``; symmetric in its arguments."""
        n = self._n
        for v in (i, j):
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or not 0 <= v < n:
                raise BadVertex(f"vertex {v!r} out of range for n={n}")
        if i == j:
            raise BadVertex(f"no label on the self-pair ({i}, {j})")
        if i > j:
            i, j = j, i
        return code_to_label(int(self._codes[pair_index(n, i, j)]))

    def pairs(self) -> Iterable[tuple[int, int, Label]]:
        """Yield ``(i, j, label)`` for every pair, including infinite ones."""
        rows, cols = pair_index_arrays(self._n)
        for i, j, c in zip(rows.tolist(), cols.tolist(), self._codes.tolist()):
            yield i, j, code_to_label(c)

    def edges(self) -> list[tuple[int, int, int]]:
        """Finite-label pairs as ``(i, j, m)`` in lexicographic order."""
        return [(i, j, m) for i, j, m in self.pairs() if m != INF]

    def __eq__(self, other):
        if not isinstance(other, DefiningGraph):
            return NotImplemented
        return self._n == other._n and np.array_equal(self._codes, other._codes)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._n, self._codes.tobytes()))
        return self._hash

    def __repr__(self):
        return f"DefiningGraph(n={self._n}, edges={self.edges()})"


def new_graph(n: int, assignments: Iterable[tuple[int, int, Label]] = ()) -> DefiningGraph:
    """Build a graph from explicit ``(i, j, label)`` triples.

    Unlisted pairs are infinite.  Raises :class:`BadVertex` for indices out of
    range or ``i == j``, :class:`DuplicateEdge` for a repeated pair (in
    either order) and :class:`BadLabel` for finite labels below 2.
    """
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise BadVertex(f"rank must be an integer >= 1, got {n!r}")
    codes = np.zeros(num_pairs(n), dtype=np.int64)
    seen = set()
    for i, j, lab in assignments:
        if i == j or not (0 <= i < n and 0 <= j < n):
            raise BadVertex(f"pair ({i}, {j}) needs two distinct vertices below {n}")
        i, j = min(i, j), max(i, j)
        if (i, j) in seen:
            raise DuplicateEdge(f"pair ({i}, {j}) assigned twice")
        seen.add((i, j))
        codes[pair_index(n, i, j)] = label_to_code(lab)
    return DefiningGraph(n, codes)


@dataclass(frozen=True)
class SampleSpace:
    """The family G^{N,M}: rank ``n`` with labels in ``{inf, 2, ..., m}``."""

    n: int
    m: int

    def __post_init__(self):
        if self.n < 1:
            raise BadVertex(f"rank must be at least 1, got {self.n}")
        if self.m < 2:
            raise BadLabel(f"maximal label must be at least 2, got {self.m}")

    @property
    def alphabet(self) -> tuple[Label, ...]:
        return (INF,) + tuple(range(2, self.m + 1))

    @property
    def num_pairs(self) -> int:
        return num_pairs(self.n)

    @property
    def size(self) -> int:
        return self.m ** self.num_pairs

    def contains(self, g: DefiningGraph) -> bool:
        return g.n == self.n and bool(np.all(g.codes <= self.m))


# -- growth functions -------------------------------------------------------


def _floor_root(value: Fraction, q: int) -> int:
    """Largest integer ``t >= 0`` with ``t**q <= value``."""
    if value <= 0:
        return 0
    t = int(math.floor(float(value) ** (1.0 / q)))
    while t > 0 and Fraction(t) ** q > value:
        t -= 1
    while Fraction(t + 1) ** q <= value:
        t += 1
    return t


@dataclass(frozen=True)
class PowerGrowth:
    """``M(N) = max(2, floor(c * N**alpha))`` with rational ``c > 0, alpha >= 0``."""

    c: Fraction = Fraction(1)
    alpha: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "c", Fraction(self.c))
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        if self.c <= 0:
            raise BadGrowth(f"growth coefficient must be positive, got {self.c}")
        if self.alpha < 0:
            raise BadGrowth(f"growth exponent must be non-negative, got {self.alpha}")

    def __call__(self, n: int) -> int:
        if n < 1:
            raise BadVertex(f"rank must be at least 1, got {n}")
        p, q = self.alpha.numerator, self.alpha.denominator
        # floor(c * n^(p/q)) is the largest t with t^q <= c^q * n^p
        t = _floor_root(self.c ** q * n ** p, q)
        return max(2, t)

    def __str__(self):
        return f"{self.c}*N^{self.alpha}"


@dataclass(frozen=True)
class TableGrowth:
    """Growth given by an explicit ``{n: m}`` table."""

    table: Mapping[int, int]

    def __call__(self, n: int) -> int:
        try:
            m = int(self.table[n])
        except KeyError:
            raise BadGrowth(f"growth table has no entry for n={n}") from None
        if m < 2:
            raise BadLabel(f"growth table gives m={m} < 2 at n={n}")
        return m

    def __str__(self):
        return "table"


GrowthSpec = Union[PowerGrowth, TableGrowth]


def growth_eval(spec: GrowthSpec, n: int) -> int:
    return spec(n)


_GROWTH_RE = re.compile(
    r"""^(?:(?P<c>\d+(?:\.\d*)?|\.\d+)\*)?
         N
         (?:\^\(?(?P<p>\d+)(?:/(?P<q>\d+))?\)?)?$""",
    re.VERBOSE,
)


def parse_growth(text: str) -> PowerGrowth:
    """Parse ``c*N^p/q`` (whitespace-insensitive) into a :class:`PowerGrowth`.

    ``c*`` and ``^p/q`` are optional: ``N`` means ``1*N^1``.  The exponent
    may be parenthesized, ``N^(3/2)``.
    """
    compact = re.sub(r"\s+", "", text)
    match = _GROWTH_RE.match(compact)
    if match is None:
        raise BadGrowth(f"cannot parse growth spec {text!r}; expected c*N^p/q")
    c = Fraction(match["c"]) if match["c"] else Fraction(1)
    p = int(match["p"]) if match["p"] else 1
    q = int(match["q"]) if match["q"] else 1
    if q == 0:
        raise BadGrowth(f"zero denominator in growth exponent {text!r}")
    return PowerGrowth(c, Fraction(p, q))


# -- canonical text form ----------------------------------------------------


def encode(g: DefiningGraph) -> str:
    """Canonical JSON text: finite pairs only, lexicographic order."""
    body = {"n": g.n, "edges": [list(e) for e in g.edges()]}
    return json.dumps(body, separators=(",", ":"))


def _decode_label(raw, where):
    if raw == "inf":
        return INF
    if isinstance(raw, bool) or not isinstance(raw, int):
        raise ParseError(f"label must be an integer or \"inf\", got {raw!r}", where)
    if raw < 2:
        raise ParseError(f"finite labels start at 2, got {raw}", where)
    return raw


def decode(text: str) -> DefiningGraph:
    """Inverse of :func:`encode`; also accepts explicit ``"inf"`` entries."""
    try:
        body = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.pos) from None
    if not isinstance(body, dict) or set(body) != {"n", "edges"}:
        raise ParseError("expected an object with exactly the keys 'n' and 'edges'", 0)
    n = body["n"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ParseError(f"'n' must be an integer >= 1, got {n!r}", "n")
    if not isinstance(body["edges"], list):
        raise ParseError("'edges' must be a list", "edges")
    triples = []
    for k, entry in enumerate(body["edges"]):
        where = f"edges[{k}]"
        if not isinstance(entry, list) or len(entry) != 3:
            raise ParseError("each edge must be a list [i, j, m]", where)
        i, j, raw = entry
        if any(isinstance(v, bool) or not isinstance(v, int) for v in (i, j)):
            raise ParseError("vertex indices must be integers", where)
        triples.append((i, j, _decode_label(raw, where)))
    try:
        return new_graph(n, triples)
    except (BadVertex, DuplicateEdge, BadLabel) as exc:
        raise ParseError(str(exc), "edges") from None

"""Membership tests for the classes of Artin groups studied on random graphs.

Every predicate takes a :class:`~artin_randlab.graph.DefiningGraph` and is a
pure function of its labels.  Degenerate ranks follow fixed conventions:

* ``n == 1``: connected, irreducible, cone, FC-type and spherical are true.
* ``n < 3``: two-dimensional is true (there is no vertex triple to violate
  the reciprocal-sum condition).
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterator

import numpy as np

from .errors import CliqueBudgetExceeded, TooSmall
from .graph import INF, INF_CODE, DefiningGraph, check_label, label_to_code

DEFAULT_CLIQUE_BUDGET = 10**6

# minimum eigenvalue a cosine matrix must exceed to count as positive definite
PD_TOLERANCE = 1e-9


def _finite_adjacency(g: DefiningGraph) -> np.ndarray:
    adj = g.matrix != INF_CODE
    np.fill_diagonal(adj, False)
    return adj


def _is_connected_adj(adj: np.ndarray) -> bool:
    n = adj.shape[0]
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    frontier = seen.copy()
    while frontier.any():
        reached = adj[frontier].any(axis=0) & ~seen
        seen |= reached
        frontier = reached
    return bool(seen.all())


def is_connected(g: DefiningGraph) -> bool:
    """True iff the graph of finite-label pairs is connected."""
    if g.n == 1:
        return True
    return _is_connected_adj(_finite_adjacency(g))


def is_k_join(g: DefiningGraph, k) -> bool:
    """True iff the vertices split into two non-empty sides joined only by ``k``.

    Equivalently, the graph whose edges are the pairs labeled differently
    from ``k`` is disconnected.  ``k`` is an integer >= 2 or ``math.inf``.
    """
    if g.n < 2:
        raise TooSmall("a join needs at least two vertices")
    code = label_to_code(k)
    other = g.matrix != code
    np.fill_diagonal(other, False)
    return not _is_connected_adj(other)


def is_irreducible(g: DefiningGraph) -> bool:
    if g.n == 1:
        return True
    return not is_k_join(g, 2)


def is_cone(g: DefiningGraph) -> bool:
    """True iff some vertex carries a finite label to every other vertex."""
    if g.n == 1:
        return True
    degrees = _finite_adjacency(g).sum(axis=1)
    return bool((degrees == g.n - 1).any())


def is_22_free(g: DefiningGraph) -> bool:
    """True iff no vertex meets two or more edges labeled 2."""
    return bool(((g.matrix == 2).sum(axis=1) <= 1).all())


def triangle_is_spherical(m1, m2, m3) -> bool:
    """Exact test ``1/m1 + 1/m2 + 1/m3 > 1`` with all three labels finite."""
    labels = [check_label(m) for m in (m1, m2, m3)]
    if INF in labels:
        return False
    return sum(Fraction(1, m) for m in labels) > 1


def _has_spherical_triangle(mat: np.ndarray) -> bool:
    # A spherical triple always contains a 2.  With the 2 on {a, b} and
    # labels x = m_ac, y = m_bc finite, 1/2 + 1/x + 1/y > 1 iff (x-2)(y-2) < 4.
    n = mat.shape[0]
    rows, cols = np.nonzero(np.triu(mat == 2, 1))
    others = np.arange(n)
    for a, b in zip(rows.tolist(), cols.tolist()):
        x = mat[a]
        y = mat[b]
        ok = (x != INF_CODE) & (y != INF_CODE) & (others != a) & (others != b)
        if np.any(ok & ((x - 2) * (y - 2) < 4)):
            return True
    return False


def is_two_dimensional(g: DefiningGraph) -> bool:
    """True iff no vertex triple spans a spherical triangle."""
    if g.n < 3:
        return True
    return not _has_spherical_triangle(g.matrix)


def cosine_matrix(codes: np.ndarray) -> np.ndarray:
    """Matrix with unit diagonal and ``-cos(pi/m)`` off the diagonal."""
    codes = np.asarray(codes)
    with np.errstate(divide="ignore", invalid="ignore"):
        gram = -np.cos(np.pi / codes.astype(float))
    np.fill_diagonal(gram, 1.0)
    return gram


def _is_positive_definite(gram: np.ndarray) -> bool:
    return bool(np.linalg.eigvalsh(gram)[0] > PD_TOLERANCE)


def _coxeter_blocks(codes: np.ndarray) -> Iterator[np.ndarray]:
    """Index sets of the connected components of the labels >= 3."""
    n = codes.shape[0]
    link = codes >= 3
    np.fill_diagonal(link, False)
    unseen = np.ones(n, dtype=bool)
    for start in range(n):
        if not unseen[start]:
            continue
        comp = np.zeros(n, dtype=bool)
        comp[start] = True
        frontier = comp.copy()
        while frontier.any():
            reached = link[frontier].any(axis=0) & ~comp
            comp |= reached
            frontier = reached
        unseen &= ~comp
        yield np.flatnonzero(comp)


def _clique_codes_finite(codes: np.ndarray, decompose: bool = True) -> bool:
    n = codes.shape[0]
    off = ~np.eye(n, dtype=bool)
    if np.any(codes[off] == INF_CODE):
        return False
    if not decompose:
        return _is_positive_definite(cosine_matrix(codes))
    # Labels 2 are commuting pairs, so the cosine matrix is block diagonal
    # over these components.  One- and two-element blocks are trivial and
    # dihedral groups, always finite.
    for block in _coxeter_blocks(codes):
        if len(block) <= 2:
            continue
        if not _is_positive_definite(cosine_matrix(codes[np.ix_(block, block)])):
            return False
    return True


def coxeter_clique_is_finite(labels, decompose: bool = True) -> bool:
    """Decide whether the Coxeter group of a complete labeled graph is finite.

    Parameters
    ----------
    labels : square array-like
        Symmetric matrix of labels (integers >= 2 or ``math.inf``); the
        diagonal is ignored.  An infinite off-diagonal label makes the group
        infinite.
    decompose : bool
        Split into the blocks connected by labels >= 3 before testing
        positive definiteness.  The block split is exact and keeps products
        of dihedral groups with very large labels well conditioned.  Pass
        ``False`` to test the whole cosine matrix at once.
    """
    rows = [list(r) for r in labels]
    n = len(rows)
    codes = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        if len(rows[i]) != n:
            raise ValueError("label matrix must be square")
        for j in range(n):
            if i != j:
                codes[i, j] = label_to_code(rows[i][j])
    if not np.array_equal(codes, codes.T):
        raise ValueError("label matrix must be symmetric")
    return _clique_codes_finite(codes, decompose)


def _all_finite_triangles_spherical(mat: np.ndarray) -> bool:
    n = mat.shape[0]
    for a in range(n - 2):
        x = mat[a, a + 1:]
        sub = mat[a + 1:, a + 1:]
        live = (x[:, None] != INF_CODE) & (x[None, :] != INF_CODE) & (sub != INF_CODE)
        live = np.triu(live, 1)
        if not live.any():
            continue
        bi, ci = np.nonzero(live)
        p, q, r = x[bi], x[ci], sub[bi, ci]
        if not np.all(_spherical_codes(p, q, r)):
            return False
    return True


def _spherical_codes(p, q, r):
    # same rule as _has_spherical_triangle, placing the 2 on each side in turn;
    # avoids the triple product, which overflows int64 for large labels
    return (
        ((p == 2) & ((q - 2) * (r - 2) < 4))
        | ((q == 2) & ((p - 2) * (r - 2) < 4))
        | ((r == 2) & ((p - 2) * (q - 2) < 4))
    )


def maximal_cliques(adj: np.ndarray, budget: int | None = DEFAULT_CLIQUE_BUDGET) -> Iterator[list[int]]:
    """Maximal cliques of a boolean adjacency matrix (Bron-Kerbosch with pivot).

    Raises :class:`CliqueBudgetExceeded` before yielding clique ``budget + 1``.
    """
    n = adj.shape[0]
    nbrs = [set(np.flatnonzero(adj[v]).tolist()) - {v} for v in range(n)]
    count = 0

    def expand(clique, cand, excl):
        nonlocal count
        if not cand and not excl:
            count += 1
            if budget is not None and count > budget:
                raise CliqueBudgetExceeded(f"more than {budget} maximal cliques")
            yield clique
            return
        pivot = max(cand | excl, key=lambda u: len(cand & nbrs[u]))
        for v in sorted(cand - nbrs[pivot]):
            yield from expand(clique + [v], cand & nbrs[v], excl & nbrs[v])
            cand = cand - {v}
            excl = excl | {v}

    yield from expand([], set(range(n)), set())


def is_fc_type(g: DefiningGraph, clique_budget: int | None = DEFAULT_CLIQUE_BUDGET) -> bool:
    """True iff every complete subgraph generates a finite Coxeter group.

    Finiteness passes to sub-cliques, so only maximal cliques are tested,
    after a fast pass that rejects any non-spherical triangle.
    """
    mat = g.matrix
    if g.n >= 3 and not _all_finite_triangles_spherical(mat):
        return False
    for clique in maximal_cliques(_finite_adjacency(g), clique_budget):
        if len(clique) <= 3:
            continue
        idx = np.array(clique)
        if not _clique_codes_finite(mat[np.ix_(idx, idx)]):
            return False
    return True


def _has_none_of(g: DefiningGraph, codes) -> bool:
    return not np.isin(g.codes, codes).any()


def is_large_type(g: DefiningGraph) -> bool:
    return _has_none_of(g, [2])


def is_extra_large(g: DefiningGraph) -> bool:
    return _has_none_of(g, [2, 3])


def is_xxl(g: DefiningGraph) -> bool:
    return _has_none_of(g, [2, 3, 4])


def is_free_of_infinity(g: DefiningGraph) -> bool:
    return _has_none_of(g, [INF_CODE])


def is_raag(g: DefiningGraph) -> bool:
    return bool(np.isin(g.codes, [INF_CODE, 2]).all())


def is_triangle_free(g: DefiningGraph) -> bool:
    adj = _finite_adjacency(g).astype(np.int64)
    return int(((adj @ adj) * adj).sum()) == 0


def is_spherical(g: DefiningGraph) -> bool:
    if np.any(g.codes == INF_CODE):
        return False
    return _clique_codes_finite(g.matrix)


# -- report -------------------------------------------------------------------

TORSION_FREE = "torsion-free"
K_PI_1 = "K(pi,1)"
WORD_PROBLEM = "solvable word problem"
CONJUGACY_PROBLEM = "solvable conjugacy problem"
TITS_ALTERNATIVE = "Tits alternative"
ACYLINDRICALLY_HYPERBOLIC = "acylindrically hyperbolic"
TRIVIAL_CENTRE = "trivial centre"
PARABOLIC_INTERSECTIONS = "parabolic subgroups closed under intersection"
CAT0 = "CAT(0)"
HIERARCHICALLY_HYPERBOLIC = "hierarchically hyperbolic"
SYSTOLIC = "systolic"
BIAUTOMATIC = "biautomatic"
OUT_FINITE = "Out finite"


@dataclass(frozen=True)
class ClassReport:
    """Class memberships of one graph plus the properties they are known to imply.

    ``fc_type`` is ``None`` when the clique budget ran out before an answer.
    """

    n: int
    connected: bool
    irreducible: bool
    cone: bool
    two_two_free: bool
    two_dimensional: bool
    fc_type: bool | None
    large_type: bool
    extra_large: bool
    xxl: bool
    free_of_infinity: bool
    raag: bool
    triangle_free: bool
    spherical: bool
    properties: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def known_properties(r: ClassReport) -> list[str]:
    """Properties implied by class membership through known results.

    The table only reads left to right: a class not being satisfied never
    removes a property.
    """
    props = []

    def add(*names):
        for name in names:
            if name not in props:
                props.append(name)

    if r.two_dimensional:
        add(TORSION_FREE, K_PI_1, WORD_PROBLEM, CONJUGACY_PROBLEM, TITS_ALTERNATIVE)
    if r.n >= 3 and r.irreducible and not r.cone:
        add(ACYLINDRICALLY_HYPERBOLIC, TRIVIAL_CENTRE)
    if r.two_two_free and r.two_dimensional:
        add(PARABOLIC_INTERSECTIONS)
    if r.xxl:
        add(CAT0)
    if r.extra_large:
        add(HIERARCHICALLY_HYPERBOLIC)
    if r.large_type:
        add(SYSTOLIC, BIAUTOMATIC)
    if r.large_type and r.free_of_infinity:
        add(OUT_FINITE)
    return props


def classify_all(g: DefiningGraph, clique_budget: int | None = DEFAULT_CLIQUE_BUDGET) -> ClassReport:
    try:
        fc = is_fc_type(g, clique_budget)
    except CliqueBudgetExceeded:
        fc = None
    report = ClassReport(
        n=g.n,
        connected=is_connected(g),
        irreducible=is_irreducible(g),
        cone=is_cone(g),
        two_two_free=is_22_free(g),
        two_dimensional=is_two_dimensional(g),
        fc_type=fc,
        large_type=is_large_type(g),
        extra_large=is_extra_large(g),
        xxl=is_xxl(g),
        free_of_infinity=is_free_of_infinity(g),
        raag=is_raag(g),
        triangle_free=is_triangle_free(g),
        spherical=is_spherical(g),
    )
    return ClassReport(**{**asdict(report), "properties": known_properties(report)})

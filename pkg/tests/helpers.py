"""Shared law checks and small graph builders for the test modules."""

import itertools
import math

import numpy as np

from artin_randlab import classify as C
from artin_randlab.graph import INF, DefiningGraph, new_graph
from artin_randlab.montecarlo import sample_codes


def triangle(a, b, c):
    """Triangle with labels on (0,1), (0,2), (1,2)."""
    return new_graph(3, [(0, 1, a), (0, 2, b), (1, 2, c)])


def law_violations(g: DefiningGraph) -> list[str]:
    """Names of the class laws that ``g`` breaks (empty when all hold)."""
    bad = []
    xxl, xl, large = C.is_xxl(g), C.is_extra_large(g), C.is_large_type(g)
    two_dim = C.is_two_dimensional(g)
    if xxl and not xl:
        bad.append("xxl => extra_large")
    if xl and not large:
        bad.append("extra_large => large")
    if large and not two_dim:
        bad.append("large => two_dimensional")
    if C.is_triangle_free(g) != (C.is_fc_type(g) and two_dim):
        bad.append("triangle_free <=> fc and two_dimensional")
    if g.n >= 2:
        if C.is_k_join(g, INF) == C.is_connected(g):
            bad.append("inf-join <=> disconnected")
        if C.is_k_join(g, 2) == C.is_irreducible(g):
            bad.append("2-join <=> reducible")
        if C.is_cone(g) and not C.is_connected(g):
            bad.append("cone => connected")
    if two_dim:
        mat = g.matrix
        for v, a, b in itertools.permutations(range(g.n), 3):
            if a < b and mat[v, a] == 2 and mat[v, b] == 2 and mat[a, b] != 0:
                bad.append("two_dimensional and adjacent 2-edges => closing inf")
                break
    return bad


# (n, m) mix for random law checks: small labels exercise 2-dim/FC,
# large labels make the xxl/extra-large chain non-vacuous
RANDOM_SHAPES = [(3, 2), (3, 5), (4, 3), (4, 6), (5, 4), (5, 8), (6, 3), (6, 12), (7, 5), (8, 20)]


def random_graphs(count: int, seed: int):
    """``count`` sampled graphs spread evenly over RANDOM_SHAPES."""
    per = math.ceil(count / len(RANDOM_SHAPES))
    for s, (n, m) in enumerate(RANDOM_SHAPES):
        for row in sample_codes(seed + s, n, m, 0, per):
            yield DefiningGraph(n, row)


def brute_force_join(g: DefiningGraph, k) -> bool:
    """Try every bipartition directly."""
    n = g.n
    for mask in range(1, 2 ** (n - 1)):
        side = [(mask >> v) & 1 for v in range(n)]
        if all(side[v] for v in range(n)):
            continue
        if all(g.label(i, j) == k for i in range(n) for j in range(n) if side[i] != side[j]):
            return True
    return False


def cosine_pd(labels) -> bool:
    """Independent positive-definiteness test via leading principal minors."""
    labs = np.asarray(labels, dtype=float)
    size = labs.shape[0]
    gram = np.eye(size)
    for i in range(size):
        for j in range(size):
            if i != j:
                gram[i, j] = -math.cos(math.pi / labs[i, j])
    return all(np.linalg.det(gram[:k, :k]) > 1e-12 for k in range(1, size + 1))

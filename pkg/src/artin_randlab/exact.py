"""Closed-form counts, probabilities and moment bounds on G^{N,M}.

Probabilities come back as :class:`ExactProb`: an exact :class:`Fraction`
whenever its size stays reasonable, and always a log-space float that keeps
working when the rational would run to hundreds of thousands of digits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import BadForbidCount, BadLabel, BadVertex, TooSmall
from .graph import INF, GrowthSpec, PowerGrowth, num_pairs

# rationals whose denominator would exceed this many decimal digits are skipped
EXACT_DIGIT_LIMIT = 60_000


@dataclass(frozen=True)
class ExactProb:
    """A probability with an optional exact value and a natural-log value."""

    value: Optional[Fraction]
    log_value: float

    def __float__(self):
        if self.value is not None:
            return float(self.value)
        return math.exp(self.log_value)

    @classmethod
    def from_fraction(cls, value: Fraction) -> "ExactProb":
        value = Fraction(value)
        return cls(value, _log_fraction(value))


def _log_fraction(x: Fraction) -> float:
    if x == 0:
        return -math.inf
    # math.log accepts arbitrarily large ints
    return math.log(x.numerator) - math.log(x.denominator)


def _check_space(n: int, m: int) -> None:
    if n < 1:
        raise BadVertex(f"rank must be at least 1, got {n}")
    if m < 2:
        raise BadLabel(f"maximal label must be at least 2, got {m}")


def _want_exact(exact: Optional[bool], digits: float) -> bool:
    if exact is None:
        return digits <= EXACT_DIGIT_LIMIT
    return exact


def falling_factorial(n: int, j: int) -> int:
    """``n! / (n - j)!``, taken to be 0 when ``j > n``."""
    if j > n:
        return 0
    return math.perm(n, j)


def count_graphs(n: int, m: int) -> int:
    _check_space(n, m)
    return m ** num_pairs(n)


def prob_forbidden_labels(n: int, m: int, k: int, exact: Optional[bool] = None) -> ExactProb:
    """Probability that none of ``k`` given labels occurs: ``((m-k)/m)^(n(n-1)/2)``."""
    _check_space(n, m)
    if not 0 <= k < m:
        raise BadForbidCount(f"need 0 <= k < m, got k={k}, m={m}")
    p = num_pairs(n)
    log_value = p * math.log1p(-k / m)
    value = None
    if _want_exact(exact, p * math.log10(m)):
        value = Fraction(m - k, m) ** p
    return ExactProb(value, log_value)


def _logsumexp(terms: list[float]) -> float:
    top = max(terms)
    return top + math.log(math.fsum(math.exp(t - top) for t in terms))


def prob_22_free_exact(n: int, m: int, exact: Optional[bool] = None) -> ExactProb:
    """Probability that no two edges labeled 2 share a vertex.

    Sums over the number ``k`` of 2-labeled edges, which must form a matching::

        ((m-1)/m)^C(n,2) * sum_{k=0}^{n//2} n! / ((n-2k)! k! 2^k) * (m-1)^-k
    """
    _check_space(n, m)
    p = num_pairs(n)
    kmax = n // 2
    log_terms = [
        math.lgamma(n + 1) - math.lgamma(n - 2 * k + 1) - math.lgamma(k + 1)
        - k * math.log(2) - k * math.log(m - 1)
        for k in range(kmax + 1)
    ]
    log_value = p * math.log1p(-1 / m) + _logsumexp(log_terms)
    value = None
    if _want_exact(exact, p * math.log10(m)):
        total = Fraction(0)
        for k in range(kmax + 1):
            matchings = math.factorial(n) // (math.factorial(n - 2 * k) * math.factorial(k) * 2**k)
            total += Fraction(matchings, (m - 1) ** k)
        value = Fraction(m - 1, m) ** p * total
    return ExactProb(value, log_value)


def expectation_x(n: int, m: int) -> Fraction:
    """Expected number of ordered triples whose apex meets two 2-labeled edges."""
    _check_space(n, m)
    if n < 3:
        raise TooSmall(f"need n >= 3, got {n}")
    return Fraction(falling_factorial(n, 3), m**2)


# Pairs of ordered triples (v1, v2, v3), (w1, w2, w3), grouped by overlap
# pattern: (coefficient, distinct vertices, distinct 2-labeled edges).
# Each pattern contributes coefficient * n!/(n-vertices)! * m^-edges.
MOMENT_CASES = {
    1: (1, 6, 4),   # disjoint triples
    2: (1, 5, 4),   # one shared vertex, central in both
    3: (4, 5, 4),   # one shared vertex, central in exactly one
    4: (4, 5, 4),   # one shared vertex, central in neither
    5: (2, 4, 4),   # two shared vertices, central in neither
    6: (4, 4, 3),   # two shared, one central in both
    7: (4, 4, 3),   # two shared, each central in the other triple only
    8: (2, 3, 2),   # same vertices, same centre
    9: (4, 3, 3),   # same vertices, different centres: all three edges are 2
    10: (8, 4, 4),  # two shared, one central in one triple only, other central in neither
}


@dataclass(frozen=True)
class MomentReport:
    """First and second moments of the adjacent-2 count and the bounds they give.

    ``cases[i]`` is the contribution of overlap pattern ``i`` (see
    :data:`MOMENT_CASES`).  Patterns 1-9 are the classical nine; pattern 10
    (two shared vertices, exactly one of which is central, and only in one
    triple) is needed for the sum to equal E[X^2].
    """

    n: int
    m: int
    e_x: Fraction
    cases: dict
    e_x2: Fraction
    ratio: Optional[Fraction]
    lower_bound: Fraction
    markov_bound: Fraction

    def case(self, i: int) -> Fraction:
        return self.cases[i]


def moment_case(i: int, n: int, m: int) -> Fraction:
    coeff, vertices, edges = MOMENT_CASES[i]
    return Fraction(coeff * falling_factorial(n, vertices), m**edges)


def expectation_x2(n: int, m: int) -> MomentReport:
    _check_space(n, m)
    e_x = Fraction(falling_factorial(n, 3), m**2)
    cases = {i: moment_case(i, n, m) for i in MOMENT_CASES}
    e_x2 = sum(cases.values(), Fraction(0))
    if e_x == 0:
        ratio, lower = None, Fraction(0)
    else:
        ratio = e_x2 / e_x**2
        lower = e_x**2 / e_x2
    return MomentReport(n, m, e_x, cases, e_x2, ratio, lower, min(Fraction(1), e_x))


def case9_coefficient_from(e_x2_total: Fraction, n: int, m: int) -> Fraction:
    """Solve for the same-vertices, different-centre coefficient given the true E[X^2]."""
    rest = sum((moment_case(i, n, m) for i in MOMENT_CASES if i != 9), Fraction(0))
    unit = Fraction(falling_factorial(n, 3), m**3)
    if unit == 0:
        raise TooSmall(f"need n >= 3, got {n}")
    return (Fraction(e_x2_total) - rest) / unit


def second_moment_lower_bound(n: int, m: int) -> ExactProb:
    """``E[X]^2 / E[X^2]``, a lower bound on P[X != 0]."""
    return ExactProb.from_fraction(expectation_x2(n, m).lower_bound)


def markov_upper_bound(n: int, m: int) -> ExactProb:
    """``min(1, E[X])``, an upper bound on P[X >= 1]."""
    _check_space(n, m)
    if n < 3:
        return ExactProb.from_fraction(Fraction(0))
    return ExactProb.from_fraction(min(Fraction(1), expectation_x(n, m)))


def cone_upper_bound(n: int, m: int) -> ExactProb:
    """Union bound over apex vertices: ``min(1, n((m-1)/m)^(n-1))``."""
    _check_space(n, m)
    return ExactProb.from_fraction(min(Fraction(1), n * Fraction(m - 1, m) ** (n - 1)))


def join_upper_bound(n: int, m: int) -> ExactProb:
    """Union bound over the smaller side: ``min(1, sum_j C(n,j) m^-(j(n-j)))``."""
    _check_space(n, m)
    total = sum((Fraction(math.comb(n, j), m ** (j * (n - j))) for j in range(1, n // 2 + 1)), Fraction(0))
    return ExactProb.from_fraction(min(Fraction(1), total))


def fc_nonmembership_lower_bound(n: int, m: int) -> ExactProb:
    """A fixed triple with three labels outside {2, inf} already breaks FC-type."""
    _check_space(n, m)
    if n < 3:
        return ExactProb.from_fraction(Fraction(0))
    return ExactProb.from_fraction(Fraction(m - 2, m) ** 3)


def spherical_triangle_count(m: int) -> int:
    """Ordered label triples in {2..m}^3 with at most one 2 that are spherical.

    These are the orderings of (2,3,3), (2,3,4) and (2,3,5): 15 once m >= 5.
    """
    count = 0
    if m >= 3:
        count += 3
    if m >= 4:
        count += 6
    if m >= 5:
        count += 6
    return count


@dataclass(frozen=True)
class TwoDimensionalBounds:
    two_two_free: float
    lower: float
    upper: float


def two_dimensional_bounds(n: int, m: int) -> TwoDimensionalBounds:
    """Sandwich for P[two-dimensional] around P[(2,2)-free] = ``b``.

    ``lower = (1 - C(n,3) * 15/(m^3 - 3n)) * b``, clipped at zero; it is only
    informative once ``m^3 > 3n``.  ``upper = b + (1 - b)/m`` is a limiting
    statement: at m = 2 it can fail for small n (at n = 3 the true value is
    7/8 against an upper value of 3/4).
    """
    b = float(prob_22_free_exact(n, m))
    upper = min(1.0, b + (1.0 - b) / m)
    denom = m**3 - 3 * n
    if denom <= 0:
        lower = 0.0
    else:
        lower = max(0.0, 1.0 - math.comb(n, 3) * spherical_triangle_count(m) / denom) * b
    return TwoDimensionalBounds(b, lower, upper)


def limit_forbidden(k: float) -> float:
    """Limit of P[no forbidden label] along M = N^2 with ``k`` labels forbidden."""
    return math.exp(-k / 2)


def forbidden_count(forbidden: tuple, m: int) -> int:
    """How many of the ``forbidden`` labels lie in the alphabet {inf, 2..m}."""
    return sum(1 for lab in forbidden if lab == INF or 2 <= lab <= m)


def closed_form(predicate, n: int, m: int) -> Optional[ExactProb]:
    """Exact membership probability when the class has a closed form here."""
    name = predicate.name
    if name.startswith("not_"):
        from .predicates import resolve_predicate

        inner = closed_form(resolve_predicate(name[4:]), n, m)
        return None if inner is None else _complement(inner)
    if predicate.forbidden is not None:
        return prob_forbidden_labels(n, m, forbidden_count(predicate.forbidden, m))
    if name == "two_two_free":
        return prob_22_free_exact(n, m)
    if name == "raag":
        # every label except inf and 2 is forbidden
        return prob_forbidden_labels(n, m, m - 2)
    return None


def _complement(p: ExactProb) -> ExactProb:
    value = None if p.value is None else 1 - p.value
    if p.log_value == -math.inf:
        return ExactProb(value, 0.0)
    if p.log_value > -0.6931:
        log_value = math.log(-math.expm1(p.log_value))
    else:
        log_value = math.log1p(-math.exp(p.log_value))
    return ExactProb(value, log_value)


_UNIFORMLY_LARGE = {"connected", "irreducible"}
_UNIFORMLY_SMALL = {"fc_type", "raag", "triangle_free", "spherical"}


def asymptote(predicate, growth: GrowthSpec) -> Optional[float]:
    """Limiting membership probability along a power growth, when known.

    Returns ``None`` where no limit is established (table growth, the
    threshold exponent for two-dimensional classes, or unhandled classes).
    """
    if not isinstance(growth, PowerGrowth) or growth.alpha <= 0:
        return None
    if isinstance(predicate, str):
        from .predicates import resolve_predicate

        predicate = resolve_predicate(predicate)
    name = predicate.name
    negate = name.startswith("not_")
    base = name[4:] if negate else name
    limit = _base_asymptote(base, growth)
    if limit is None:
        return None
    return 1.0 - limit if negate else limit


def _base_asymptote(name: str, growth: PowerGrowth) -> Optional[float]:
    alpha, c = growth.alpha, growth.c
    from .predicates import resolve_predicate

    pred = resolve_predicate(name)
    if pred.forbidden is not None:
        k = len(pred.forbidden)
        if k == 0 or alpha > 2:
            return 1.0
        if alpha < 2:
            return 0.0
        # (1 - k/(cN^2))^(N^2/2) -> exp(-k/(2c))
        return math.exp(-k / (2 * float(c)))
    if name in ("two_dimensional", "two_two_free"):
        if alpha > Fraction(3, 2):
            return 1.0
        if alpha < Fraction(3, 2):
            return 0.0
        return None
    if name in _UNIFORMLY_LARGE:
        return 1.0
    if name in _UNIFORMLY_SMALL or name.startswith("join:"):
        return 0.0
    if name == "cone" and alpha < 1:
        return 0.0
    return None

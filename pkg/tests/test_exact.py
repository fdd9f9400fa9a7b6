import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from artin_randlab import exact
from artin_randlab.classify import triangle_is_spherical
from artin_randlab.errors import BadForbidCount, BadLabel, TooSmall
from artin_randlab.graph import PowerGrowth, TableGrowth, parse_growth
from artin_randlab.oracle import exact_probability
from artin_randlab.predicates import resolve_predicate


def test_count_graphs():
    assert exact.count_graphs(3, 3) == 27
    assert exact.count_graphs(1, 5) == 1
    assert exact.count_graphs(4, 2) == 64
    with pytest.raises(BadLabel):
        exact.count_graphs(3, 1)


def test_forbidden_examples():
    assert exact.prob_forbidden_labels(3, 3, 1).value == Fraction(8, 27)
    for n, m in [(1, 2), (5, 7), (40, 3)]:
        assert exact.prob_forbidden_labels(n, m, 0).value == 1
    with pytest.raises(BadForbidCount):
        exact.prob_forbidden_labels(3, 3, 3)
    with pytest.raises(BadForbidCount):
        exact.prob_forbidden_labels(3, 3, -1)


def test_22_free_examples():
    assert exact.prob_22_free_exact(3, 3).value == Fraction(20, 27)
    for m in (2, 3, 50):
        assert exact.prob_22_free_exact(2, m).value == 1
        assert exact.prob_22_free_exact(1, m).value == 1
    assert exact.prob_22_free_exact(3, 5).value == Fraction(112, 125)
    assert 0.60 < float(exact.prob_22_free_exact(190, 2618)) < 0.70


def test_expectation_x():
    assert exact.expectation_x(4, 2) == 6
    assert exact.expectation_x(3, 3) == Fraction(2, 3)
    with pytest.raises(TooSmall):
        exact.expectation_x(2, 5)


def test_moment_case_one():
    for m in (2, 3, 11):
        assert exact.expectation_x2(6, m).case(1) == Fraction(720, m**4)


def test_moment_report_bounds():
    r = exact.expectation_x2(4, 2)
    assert r.e_x == 6 and r.e_x2 == 63
    assert r.lower_bound == Fraction(36, 63) and r.ratio == Fraction(63, 36)
    assert r.markov_bound == 1
    degenerate = exact.expectation_x2(2, 4)
    assert degenerate.e_x == 0 and degenerate.lower_bound == 0 and degenerate.ratio is None
    assert exact.second_moment_lower_bound(2, 4).value == 0
    assert 0 < exact.second_moment_lower_bound(3, 3).value <= 1


def test_markov_cone_join_examples():
    assert exact.markov_upper_bound(4, 100).value == Fraction(24, 10000)
    assert exact.cone_upper_bound(3, 2).value == Fraction(3, 4)
    assert exact.cone_upper_bound(1, 9).value == 1
    assert exact.join_upper_bound(4, 2).value == Fraction(7, 8)
    for m in (2, 3, 10):
        assert exact.join_upper_bound(2, m).value == min(1, Fraction(2, m))


def test_limit_forbidden():
    assert exact.limit_forbidden(1) == pytest.approx(0.6065306597)
    assert exact.limit_forbidden(0) == 1
    assert exact.limit_forbidden(2) == pytest.approx(0.36787944)


# -- log path ---------------------------------------------------------------


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 60), st.integers(2, 64))
def test_log_path_agrees_with_rational(n, m):
    def log(x):
        # exact big-integer logs; float(x) would underflow
        return math.log(x.numerator) - math.log(x.denominator)

    free = exact.prob_22_free_exact(n, m, exact=True)
    assert free.log_value == pytest.approx(log(free.value), abs=1e-10)
    for k in range(min(m, 4)):
        forb = exact.prob_forbidden_labels(n, m, k, exact=True)
        if forb.value == 0:
            continue
        assert forb.log_value == pytest.approx(log(forb.value), abs=1e-10)


def test_large_arguments_skip_the_rational():
    big = exact.prob_22_free_exact(190, 2618)
    assert big.value is None
    assert exact.prob_22_free_exact(190, 2618, exact=True).value is not None
    assert float(exact.prob_forbidden_labels(10**4, 10**8, 1)) == pytest.approx(math.exp(-0.49995), rel=1e-4)


def test_monotone_in_m():
    """More labels make 2s rarer, so (2,2)-freeness only gets likelier."""
    for n in range(3, 61, 3):
        values = [float(exact.prob_22_free_exact(n, m)) for m in range(2, 65)]
        assert all(a <= b + 1e-15 for a, b in zip(values, values[1:])), n


def test_monotone_in_n():
    for m in range(2, 65, 7):
        values = [float(exact.prob_22_free_exact(n, m)) for n in range(1, 61)]
        assert all(b <= a + 1e-15 for a, b in zip(values, values[1:])), m


# -- moments and case 9 -----------------------------------------------------------


def test_case9_resolves_to_four():
    for n, m in [(4, 2), (4, 3), (5, 2), (3, 3), (6, 7)]:
        total = exact.expectation_x2(n, m).e_x2
        assert exact.case9_coefficient_from(total, n, m) == 4


def test_case_ten_is_needed():
    # without the extra pattern no constant case-9 coefficient fits the (4,2) oracle value 63
    n, m = 4, 2
    nine = sum(exact.moment_case(i, n, m) for i in range(1, 10))
    assert nine + exact.moment_case(10, n, m) == 63
    assert nine != 63


# -- two-dimensional sandwich -----------------------------------------------------


def test_spherical_triangle_count_brute_force():
    for m in range(2, 12):
        brute = sum(
            triangle_is_spherical(*t)
            for t in itertools.product(range(2, m + 1), repeat=3)
            if t.count(2) <= 1
        )
        assert exact.spherical_triangle_count(m) == brute, m


@pytest.mark.parametrize("n, m", [(3, 3), (3, 5), (4, 3), (4, 4), (5, 3), (3, 12)])
def test_two_dimensional_bounds_hold_for_m_at_least_3(n, m):
    truth = float(exact_probability("two_dimensional", n, m))
    b = exact.two_dimensional_bounds(n, m)
    assert b.lower <= truth <= b.upper


@pytest.mark.parametrize("n", [3, 4])
def test_two_dimensional_upper_fails_at_m_2(n):
    """The upper value is a limit statement; at m = 2 it sits below the truth."""
    truth = float(exact_probability("two_dimensional", n, 2))
    b = exact.two_dimensional_bounds(n, 2)
    assert b.lower <= truth
    assert truth > b.upper


def test_two_dimensional_truth_at_3_2():
    assert exact_probability("two_dimensional", 3, 2) == Fraction(7, 8)


# -- closed forms and asymptotes -----------------------------------------------


@pytest.mark.parametrize(
    "name, n, m",
    [("large", 4, 3), ("xxl", 3, 5), ("free_of_infinity", 3, 4), ("raag", 3, 4), ("22free", 4, 3),
     ("not_large", 3, 3), ("avoid:2,inf", 3, 4), ("xl", 3, 2)],
)
def test_closed_form_matches_oracle(name, n, m):
    pred = resolve_predicate(name)
    assert exact.closed_form(pred, n, m).value == exact_probability(pred, n, m)


def test_closed_form_absent_for_structural_classes():
    assert exact.closed_form(resolve_predicate("cone"), 5, 5) is None


@pytest.mark.parametrize(
    "name, growth, want",
    [
        ("large", "N^2", math.exp(-0.5)),
        ("large", "2*N^2", math.exp(-0.25)),
        ("xxl", "N^2", math.exp(-1.5)),
        ("large", "N", 0.0),
        ("large", "N^3", 1.0),
        ("avoid:", "N", 1.0),
        ("2dim", "N^5/2", 1.0),
        ("2dim", "N", 0.0),
        ("2dim", "N^3/2", None),
        ("not_cone", "N^1/2", 1.0),
        ("cone", "N^2", None),
        ("connected", "N", 1.0),
        ("fc", "N", 0.0),
        ("join:2", "N", 0.0),
    ],
)
def test_asymptote(name, growth, want):
    got = exact.asymptote(resolve_predicate(name), parse_growth(growth))
    if want is None:
        assert got is None
    else:
        assert got == pytest.approx(want)


def test_asymptote_needs_power_growth():
    assert exact.asymptote("large", TableGrowth({3: 4})) is None
    assert exact.asymptote("large", PowerGrowth(1, 0)) is None

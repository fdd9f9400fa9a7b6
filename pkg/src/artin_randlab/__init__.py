"""Random Artin groups: sampling, classification and exact probabilities on G^{N,M}."""

from .classify import (
    ClassReport,
    classify_all,
    coxeter_clique_is_finite,
    is_22_free,
    is_cone,
    is_connected,
    is_extra_large,
    is_fc_type,
    is_free_of_infinity,
    is_irreducible,
    is_k_join,
    is_large_type,
    is_raag,
    is_spherical,
    is_triangle_free,
    is_two_dimensional,
    is_xxl,
    triangle_is_spherical,
)
from .errors import *  # noqa: F401,F403
from .exact import (
    ExactProb,
    MomentReport,
    cone_upper_bound,
    count_graphs,
    expectation_x,
    expectation_x2,
    join_upper_bound,
    limit_forbidden,
    markov_upper_bound,
    prob_22_free_exact,
    prob_forbidden_labels,
    second_moment_lower_bound,
)
from .graph import (
    INF,
    DefiningGraph,
    PowerGrowth,
    SampleSpace,
    TableGrowth,
    decode,
    encode,
    growth_eval,
    new_graph,
    parse_growth,
)
from .montecarlo import Estimate, estimate, sample_graph, sweep
from .oracle import enumerate_graphs, exact_probability, moments_by_enumeration
from .predicates import resolve_predicate

__version__ = "0.1.0"

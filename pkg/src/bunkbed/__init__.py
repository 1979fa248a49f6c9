"""Exact verification of the bunkbed inequality on complete graphs at p = 1/2."""

from .counting import (
    ClassIndex,
    gc,
    gc_bounds,
    gc_bruteforce,
    lemma_sums,
    outside_edges,
    q,
    q1,
    q2,
    q_enumerated,
    q_negativity_interval,
    verify_lemma1,
)
from .decomposition import (
    DyadicProbability,
    GroupTerm,
    all_group_terms,
    bunkbed_gap,
    exact_prob,
    group_term,
    verify_theorem,
)
from .errors import CapExceededError
from .graph import (
    BunkbedGraph,
    ConfigMask,
    brute_force_census,
    build_bunkbed,
    connected,
    exact_prob_bruteforce,
    main_component,
    outside_edges_direct,
)

__version__ = "0.1.0"

"""Exact computation of digraph inversion numbers.

Bit-packed GF(2) machinery, oriented-graph inversions, the standard
constructions (dijoin, k-join, blow-up, reversed-path tournaments), exact
solvers with certified witnesses, and a CLI of reproducible sweeps.
"""

from .digraph import (
    Digraph,
    InversionFamily,
    VectorAssignment,
    apply_assignment,
    apply_family,
    assignment_to_family,
    enumerate_tournaments,
    extend_to_tournament,
    family_rank,
    family_to_assignment,
    flip_matrix,
    invert,
    is_acyclic,
    is_even_weight_assignment,
    nonisomorphic_tournaments,
    reverse,
)
from .construct import (
    blow_up,
    c3,
    compose_blowup_family,
    dijoin,
    extend_family_to_c3_dijoin,
    graph_from_expr,
    k_join,
    parse_expr,
    qn,
    qn_family,
    transitive,
)
from .f2 import (
    BitVec,
    GramFactorization,
    SymMatrix,
    dot,
    gram_factor,
    gram_of,
    min_gram_dim,
    min_gram_dim_free_diag,
    rank,
    realize_oracle,
)
from .solver import (
    InvResult,
    SearchOptions,
    exists_family,
    inv_exact,
    inv_order_backend,
    inv_subset_oracle,
    is_c3_tight,
    rank_lower_bound_check,
)

__version__ = "0.1.0"

__all__ = [
    "BitVec",
    "Digraph",
    "GramFactorization",
    "InvResult",
    "InversionFamily",
    "SearchOptions",
    "SymMatrix",
    "VectorAssignment",
    "apply_assignment",
    "apply_family",
    "assignment_to_family",
    "blow_up",
    "c3",
    "compose_blowup_family",
    "dijoin",
    "dot",
    "enumerate_tournaments",
    "exists_family",
    "extend_family_to_c3_dijoin",
    "extend_to_tournament",
    "family_rank",
    "family_to_assignment",
    "flip_matrix",
    "gram_factor",
    "gram_of",
    "graph_from_expr",
    "inv_exact",
    "inv_order_backend",
    "inv_subset_oracle",
    "invert",
    "is_acyclic",
    "is_c3_tight",
    "is_even_weight_assignment",
    "k_join",
    "min_gram_dim",
    "min_gram_dim_free_diag",
    "nonisomorphic_tournaments",
    "parse_expr",
    "qn",
    "qn_family",
    "rank",
    "rank_lower_bound_check",
    "realize_oracle",
    "reverse",
    "transitive",
]

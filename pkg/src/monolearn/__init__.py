"""Exact learning of monotone Boolean functions under competitive analysis.

Truth tables are integers: bit ``S`` holds ``f(S)``, where element ``i`` of
``{1..n}`` is bit ``i-1`` of the subset mask ``S``.
"""
from .competitive import (
    CompetitivityReport,
    ExactnessError,
    evaluate_competitivity,
    log2_lower_bound,
    monotone_bound_chain,
    trivial_lower_bound,
)
from .core import (
    Antichain,
    ElementSet,
    MonotoneFn,
    Permutation,
    apply_permutation,
    canonical_form,
    certificate_size,
    from_hex,
    from_lower_antichain,
    from_upper_antichain,
    is_monotone,
    lift,
    maximal_lower_sets,
    minimal_upper_sets,
    to_hex,
)
from .enumeration import b_profile, count_all, enumerate_all, enumerate_inequivalent
from .learners import find_border_learn, find_border_learn_dual, hansel_chains, hansel_learn, learn
from .optsearch import adversary_lower_bound, compute_optimal, state_value, verify_tree
from .oracle import OracleSession, PartialKnowledge, min_remaining_certificate, query
from .trees import Leaf, Node, Open, parse_tree, serialize, to_dot

__version__ = "0.1.0"


def backend() -> str:
    """Name of the active canonicalization kernel ("compiled" or "python")."""
    from . import _accel

    return _accel.BACKEND


__all__ = [
    "Antichain",
    "CompetitivityReport",
    "ElementSet",
    "ExactnessError",
    "Leaf",
    "MonotoneFn",
    "Node",
    "Open",
    "OracleSession",
    "PartialKnowledge",
    "Permutation",
    "adversary_lower_bound",
    "apply_permutation",
    "b_profile",
    "backend",
    "canonical_form",
    "certificate_size",
    "compute_optimal",
    "count_all",
    "enumerate_all",
    "enumerate_inequivalent",
    "evaluate_competitivity",
    "find_border_learn",
    "find_border_learn_dual",
    "from_hex",
    "from_lower_antichain",
    "from_upper_antichain",
    "hansel_chains",
    "hansel_learn",
    "is_monotone",
    "learn",
    "lift",
    "log2_lower_bound",
    "maximal_lower_sets",
    "min_remaining_certificate",
    "minimal_upper_sets",
    "monotone_bound_chain",
    "parse_tree",
    "query",
    "serialize",
    "state_value",
    "to_dot",
    "to_hex",
    "trivial_lower_bound",
    "verify_tree",
]

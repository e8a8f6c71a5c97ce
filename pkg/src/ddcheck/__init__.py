"""Confluence certificates for first-order term rewriting.

Check machine-readable confluence proofs built from a rule labeling,
per-peak joining diagrams, relative termination of the duplicating rules,
and, for conversion-style diagrams, a reachability bound; search for such
certificates on small systems; and analyse finite labeled abstract rewrite
systems directly.
"""

__version__ = "0.1.0"

from .ars import FiniteArs, LabelOrders, check_eld, coarsen, confluent_bruteforce, down_set, make_ars, make_orders, parse_ars
from .certificate import (
    Certificate,
    Verdict,
    certificate_from_json,
    certificate_to_json,
    check,
    match_entry,
    parse_certificate,
    serialize_certificate,
)
from .trs_format import parse_trs
from .labeling import Diagram, check_eld_diagram, check_fan, greedy_split, label_step
from .peaks import CriticalPeak, LocalPeak, classify, critical_peaks, join_parallel, join_variable, match_function_peak
from .prover import ProverConfig, assign_labels, find_joins, prove
from .relterm import Interpretation, eval_linear, search_interpretation, verify_relative
from .rewrite import (
    Conversion,
    ParallelStep,
    RedexPattern,
    Step,
    apply_parallel,
    embed_parallel,
    joinable_within,
    lift_variable_step,
    reachable_within,
    sequentialize,
    step_at,
    validate_conversion,
    validate_step,
)
from .terms import (
    Fun,
    Position,
    Rule,
    Term,
    Trs,
    Var,
    apply_subst,
    linearity,
    mgu,
    positions,
    rename_apart,
    replace_at,
    split_duplicating,
    subterm_at,
    var_count,
)

__all__ = [name for name in dir() if not name.startswith("_")]

"""Generic monodromy representations of the genus-2 surface braid group B_2 into S_n."""

from .classify import ConjugacyClassRecord, SurfaceReport, classify, surface_report, table_report
from .enumerator import (
    EnumerationResult,
    MonodromyRep,
    SearchConfig,
    brute_force_oracle,
    enumerate_reps,
    r2_candidates,
    resume,
    verify,
)
from .perm import Permutation, compose, conjugate, cycle_type, inverse, is_transposition, summarize_generated_group
from .presentation import bellingeri_relations, evaluate_word, satisfies_all_relations

__version__ = "0.1.0"

__all__ = [
    "ConjugacyClassRecord", "SurfaceReport", "classify", "surface_report", "table_report",
    "EnumerationResult", "MonodromyRep", "SearchConfig", "brute_force_oracle", "enumerate_reps",
    "r2_candidates", "resume", "verify",
    "Permutation", "compose", "conjugate", "cycle_type", "inverse", "is_transposition",
    "summarize_generated_group",
    "bellingeri_relations", "evaluate_word", "satisfies_all_relations",
]

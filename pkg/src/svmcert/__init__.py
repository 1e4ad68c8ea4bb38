"""Certification, individual-fairness verification and feature importance
for binary SVMs via abstract interpretation."""

from .errors import InputError, InvariantViolation
from .intervals import Hyperrectangle, IntervalValue
from .model import (
    FeatureSchema,
    KernelSpec,
    LabeledDataset,
    NumericFeature,
    SvmModel,
    TierFeature,
    balanced_accuracy,
    classify,
    decision_value,
    kernel_eval,
)
from .onehot import CpValue, OneHotValue
from .raf import RafValue
from .verifier import (
    AbstractRegion,
    Domain,
    OutputAbstraction,
    PerturbationSpec,
    VerificationOutcome,
    abstract_classify,
    abstract_decision,
    build_region,
    condense_tiers,
    full_input_region,
    robustness_score,
    verify_robust,
)
from .fairness import SimilaritySpec, fairness_lower_bound, similarity_to_perturbation
from .importance import ImportanceReport, afi, afi_scores, pfi, rank_compare
from .search import Counterexample, SearchConfig, fairness_upper_bound, search, vertex_candidate

__version__ = "0.1.0"

__all__ = [
    "AbstractRegion",
    "Counterexample",
    "CpValue",
    "Domain",
    "FeatureSchema",
    "Hyperrectangle",
    "ImportanceReport",
    "InputError",
    "IntervalValue",
    "InvariantViolation",
    "KernelSpec",
    "LabeledDataset",
    "NumericFeature",
    "OneHotValue",
    "OutputAbstraction",
    "PerturbationSpec",
    "RafValue",
    "SearchConfig",
    "SimilaritySpec",
    "SvmModel",
    "TierFeature",
    "VerificationOutcome",
    "abstract_classify",
    "abstract_decision",
    "afi",
    "afi_scores",
    "balanced_accuracy",
    "build_region",
    "classify",
    "condense_tiers",
    "decision_value",
    "fairness_lower_bound",
    "fairness_upper_bound",
    "full_input_region",
    "kernel_eval",
    "pfi",
    "rank_compare",
    "robustness_score",
    "search",
    "similarity_to_perturbation",
    "verify_robust",
    "vertex_candidate",
]

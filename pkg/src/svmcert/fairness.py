"""Individual fairness as robustness over similarity-induced regions."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError
from .model import FeatureSchema, LabeledDataset, SvmModel
from .verifier import (
    Domain,
    PerturbationSpec,
    VerificationOutcome,
    verification_outcomes,
)

SIMILARITY_NAMES = ("noise", "cat", "noise-cat")


@dataclass(frozen=True)
class SimilaritySpec:
    """A similarity relation between individuals.

    noise: numeric features within epsilon, everything else equal.
    cat: sensitive categorical attributes free, everything else equal.
    noise-cat: the union of the two.
    """

    name: str
    epsilon: float = 0.05
    numeric_features: tuple[int, ...] | None = None  # None means all numeric
    categories: tuple[str, ...] = ()

    def __post_init__(self):
        if self.name not in SIMILARITY_NAMES:
            raise InputError(f"unknown similarity relation {self.name!r}")
        if self.name in ("cat", "noise-cat") and not self.categories:
            raise InputError(f"{self.name!r} similarity requires sensitive categories")


def similarity_to_perturbation(
    s: SimilaritySpec, schema: FeatureSchema
) -> PerturbationSpec:
    """The perturbation whose region is exactly the set of similar inputs."""
    numeric = (
        tuple(schema.numeric_indices())
        if s.numeric_features is None
        else tuple(s.numeric_features)
    )
    if s.name == "noise":
        spec = PerturbationSpec.linf_noise(s.epsilon, numeric)
    elif s.name == "cat":
        spec = PerturbationSpec.cat_free(tuple(s.categories))
    else:
        spec = PerturbationSpec.noise_cat(s.epsilon, numeric, tuple(s.categories))
    spec.validate(schema)
    return spec


def fairness_outcomes(
    m: SvmModel,
    data: LabeledDataset,
    s: SimilaritySpec,
    domain: Domain = Domain.RAF,
    oh_enabled: bool = True,
    jobs: int = 1,
) -> list[VerificationOutcome]:
    """Per-sample fairness verdicts (identical to robustness verdicts under
    the induced perturbation)."""
    spec = similarity_to_perturbation(s, m.schema)
    return verification_outcomes(m, data, spec, domain, oh_enabled, jobs)


def fairness_lower_bound(
    m: SvmModel,
    data: LabeledDataset,
    s: SimilaritySpec,
    domain: Domain = Domain.RAF,
    oh_enabled: bool = True,
    jobs: int = 1,
) -> float:
    """Fraction of samples with verified fairness: a sound lower bound."""
    outcomes = fairness_outcomes(m, data, s, domain, oh_enabled, jobs)
    return sum(1 for o in outcomes if o.proved_robust) / len(outcomes)

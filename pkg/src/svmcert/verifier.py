"""Abstract SVM evaluation: regions, kernel lifting, condensation, verdicts.

A perturbation around a sample becomes an AbstractRegion: one RAF per input
feature, with a dedicated noise symbol per perturbed feature (symbol index =
feature index).  Freed one-hot tier members are encoded as 0.5 +- 0.5 eps so
the legal assignments of a tier map onto the sign patterns "one symbol at
+1, the rest at -1", which tier condensation enumerates exactly.

Analysis precision levels:
  - interval: plain interval arithmetic over the same kernel pipeline;
  - interval + one-hot: the RAF pipeline with every non-tier linear term
    collapsed into the error radius after each operation, then condensed;
  - RAF: the full relational pipeline;
  - RAF + one-hot: RAF followed by tier condensation.
Label verdicts above the plain interval level are additionally intersected
with the weaker levels' verdicts (a reduced product).  Each component is
sound, so the intersection is sound, and the precision ordering
interval <= interval+OH <= RAF+OH and interval <= RAF <= RAF+OH holds
structurally instead of empirically.  A pure affine pipeline cannot
guarantee that ordering by itself: its multiplication and exponential keep
linear terms at the cost of symmetric error bounds, which on one-sided
ranges can be wider than the exact interval image (consider squaring
[c - r, c + r] with c > r > 0).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np

from .errors import InputError, InvariantViolation
from .intervals import (
    IntervalValue,
    interval_add,
    interval_affine,
    interval_exp,
    interval_intersect,
    interval_mul,
)
from .model import (
    FeatureSchema,
    LabeledDataset,
    NumericFeature,
    SvmModel,
    TierFeature,
    classify,
)
from .raf import (
    RafValue,
    raf_add,
    raf_affine,
    raf_collapse,
    raf_exp,
    raf_mul,
    raf_range,
)


class Domain(enum.Enum):
    INTERVAL = "interval"
    RAF = "raf"


@dataclass(frozen=True)
class PerturbationSpec:
    """Which inputs may move: an L-inf ball on numeric features and/or
    full freedom over the chosen categorical tiers."""

    epsilon: float = 0.0
    numeric_features: tuple[int, ...] = ()
    categories: tuple[str, ...] = ()

    def __post_init__(self):
        if self.epsilon < 0.0:
            raise InputError("epsilon must be >= 0")

    @classmethod
    def linf_noise(cls, epsilon: float, features: tuple[int, ...]) -> "PerturbationSpec":
        return cls(epsilon=epsilon, numeric_features=tuple(features))

    @classmethod
    def cat_free(cls, categories: tuple[str, ...]) -> "PerturbationSpec":
        return cls(categories=tuple(categories))

    @classmethod
    def noise_cat(
        cls, epsilon: float, features: tuple[int, ...], categories: tuple[str, ...]
    ) -> "PerturbationSpec":
        return cls(
            epsilon=epsilon,
            numeric_features=tuple(features),
            categories=tuple(categories),
        )

    def validate(self, schema: FeatureSchema) -> None:
        numeric = set(schema.numeric_indices())
        for i in self.numeric_features:
            if i not in numeric:
                raise InputError(f"perturbed feature {i} is not a numeric feature")
        cats = schema.categories()
        for c in self.categories:
            if c not in cats:
                raise InputError(f"unknown category {c!r}")


@dataclass(frozen=True)
class TierGroup:
    category: str
    member_features: tuple[int, ...]
    symbols: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class AbstractRegion:
    vars: tuple[RafValue, ...]
    tier_groups: tuple[TierGroup, ...]
    numeric_symbols: tuple[tuple[int, int], ...]  # (feature index, symbol index)
    domain: Domain
    oh_enabled: bool

    @property
    def width(self) -> int:
        return len(self.vars)

    def tier_symbol_set(self) -> frozenset[int]:
        return frozenset(s for g in self.tier_groups for s in g.symbols)

    def bounds(self) -> tuple[IntervalValue, ...]:
        return tuple(raf_range(v) for v in self.vars)


def _make_region(
    x,
    noise_boxes: dict[int, tuple[float, float]],
    freed: tuple[str, ...],
    schema: FeatureSchema,
    domain: Domain,
    oh_enabled: bool,
) -> AbstractRegion:
    cats = schema.categories()
    freed_members = {i for c in freed for i in cats[c]}
    vars_: list[RafValue] = []
    numeric_symbols: list[tuple[int, int]] = []
    for i, f in enumerate(schema.features):
        if i in noise_boxes:
            lo, hi = noise_boxes[i]
            vars_.append(RafValue.symbol(0.5 * (lo + hi), i, 0.5 * (hi - lo)))
            numeric_symbols.append((i, i))
        elif i in freed_members:
            vars_.append(RafValue.symbol(0.5, i, 0.5))
        else:
            vars_.append(RafValue.constant(float(x[i])))
    groups = tuple(
        TierGroup(category=c, member_features=cats[c], symbols=cats[c])
        for c in freed
    )
    return AbstractRegion(
        vars=tuple(vars_),
        tier_groups=groups,
        numeric_symbols=tuple(numeric_symbols),
        domain=domain,
        oh_enabled=oh_enabled,
    )


def clipped_box(
    x, feature: int, epsilon: float, schema: FeatureSchema
) -> tuple[float, float]:
    """[x_i - eps, x_i + eps] intersected with the feature's declared range."""
    f = schema.features[feature]
    assert isinstance(f, NumericFeature)
    lo = max(float(x[feature]) - epsilon, f.range.lo)
    hi = min(float(x[feature]) + epsilon, f.range.hi)
    if lo > hi:
        raise InputError(
            f"perturbation box for feature {f.name!r} does not intersect its range"
        )
    return lo, hi


def build_region(
    x,
    spec: PerturbationSpec,
    schema: FeatureSchema,
    domain: Domain = Domain.RAF,
    oh_enabled: bool = True,
) -> AbstractRegion:
    """Abstract the perturbation of a concrete sample into per-feature RAFs."""
    schema.validate_point(x)
    spec.validate(schema)
    boxes = {
        i: clipped_box(x, i, spec.epsilon, schema) for i in spec.numeric_features
    }
    return _make_region(x, boxes, tuple(spec.categories), schema, domain, oh_enabled)


def full_input_region(
    schema: FeatureSchema, domain: Domain = Domain.RAF, oh_enabled: bool = True
) -> AbstractRegion:
    """Region covering the whole declared input space (for global importance)."""
    boxes = {}
    mids = np.zeros(schema.width)
    for i, f in enumerate(schema.features):
        if isinstance(f, NumericFeature):
            boxes[i] = (f.range.lo, f.range.hi)
            mids[i] = f.range.mid
    cats = schema.categories()
    for members in cats.values():
        mids[members[0]] = 1.0  # any legal one-hot; freed below anyway
    return _make_region(mids, boxes, tuple(cats), schema, domain, oh_enabled)


@dataclass(frozen=True, eq=False)
class OutputAbstraction:
    raf: RafValue  # raw analysis output
    condensed: RafValue  # tier symbols replaced by enumerated intervals
    range: IntervalValue


@dataclass(frozen=True, eq=False)
class VerificationOutcome:
    labels: frozenset[int]
    proved_robust: bool
    output: OutputAbstraction


def _raf_decision(m: SvmModel, region: AbstractRegion, collapse: bool) -> RafValue:
    keep = region.tier_symbol_set() if collapse else None

    def post(v: RafValue) -> RafValue:
        return raf_collapse(v, keep) if collapse else v

    vars_ = tuple(post(v) for v in region.vars)
    total = RafValue.constant(0.0)
    for alpha, sv in zip(m.alphas, m.support_vectors):
        dot = RafValue.constant(0.0)
        if m.kernel.kind in ("linear", "polynomial"):
            for j in range(m.dim):
                if sv[j] != 0.0:
                    dot = post(raf_add(dot, raf_affine(vars_[j], float(sv[j]), 0.0)))
            if m.kernel.kind == "linear":
                k_val = dot
            else:
                base = post(raf_affine(dot, 1.0, m.kernel.coeff))
                k_val = base
                for _ in range(m.kernel.degree - 1):
                    k_val = post(raf_mul(k_val, base))
        else:
            sq_sum = RafValue.constant(0.0)
            for j in range(m.dim):
                diff = post(raf_affine(vars_[j], -1.0, float(sv[j])))
                sq_sum = post(raf_add(sq_sum, post(raf_mul(diff, diff))))
            k_val = post(raf_exp(sq_sum, -m.kernel.gamma))
        total = post(raf_add(total, raf_affine(k_val, float(alpha), 0.0)))
    return raf_affine(total, 1.0, -m.bias)


def _interval_decision(m: SvmModel, region: AbstractRegion) -> IntervalValue:
    vars_ = region.bounds()
    total = IntervalValue(0.0, 0.0)
    for alpha, sv in zip(m.alphas, m.support_vectors):
        if m.kernel.kind in ("linear", "polynomial"):
            dot = IntervalValue(0.0, 0.0)
            for j in range(m.dim):
                if sv[j] != 0.0:
                    dot = interval_add(dot, interval_affine(vars_[j], float(sv[j]), 0.0))
            if m.kernel.kind == "linear":
                k_val = dot
            else:
                base = interval_affine(dot, 1.0, m.kernel.coeff)
                k_val = base
                for _ in range(m.kernel.degree - 1):
                    k_val = interval_mul(k_val, base)
        else:
            sq_sum = IntervalValue(0.0, 0.0)
            for j in range(m.dim):
                diff = interval_affine(vars_[j], -1.0, float(sv[j]))
                sq_sum = interval_add(sq_sum, interval_mul(diff, diff))
            k_val = interval_exp(interval_affine(sq_sum, -m.kernel.gamma, 0.0))
        total = interval_add(total, interval_affine(k_val, float(alpha), 0.0))
    return interval_affine(total, 1.0, -m.bias)


def condense_tiers(out: RafValue, groups: tuple[TierGroup, ...]) -> RafValue:
    """Replace each tier's symbols with one interval-shaped fresh symbol.

    With the 0.5 +- 0.5 eps encoding, a legal tier assignment sets exactly
    one member symbol to +1 and the rest to -1; enumerating the k such
    assignments gives the exact reachable set of the tier's linear
    contribution, which is re-centered onto a fresh symbol.  Numeric terms
    and the error radius pass through unchanged.
    """
    if out.is_top:
        raise InputError("cannot condense a top RAF")
    if not groups:
        return out
    used = set(out.linear)
    for g in groups:
        used.update(g.symbols)
    fresh = max(used, default=-1) + 1
    center = out.center
    linear = dict(out.linear)
    for g in groups:
        coeffs = [linear.pop(s, 0.0) for s in g.symbols]
        total = sum(coeffs)
        deltas = [2.0 * c - total for c in coeffs]
        lo, hi = min(deltas), max(deltas)
        center += 0.5 * (lo + hi)
        rad = 0.5 * (hi - lo)
        if rad != 0.0:
            linear[fresh] = rad
            fresh += 1
    return RafValue(center=center, linear=linear, nonlinear_radius=out.nonlinear_radius)


def abstract_decision(m: SvmModel, region: AbstractRegion) -> OutputAbstraction:
    """Lift the dual-form decision function over one region at the region's
    precision level.  Reduced-product label refinement happens one level up,
    in verify_robust."""
    if region.width != m.dim:
        raise InputError(
            f"region width {region.width} does not match model dimension {m.dim}"
        )
    if region.domain is Domain.INTERVAL:
        if region.oh_enabled and region.tier_groups:
            raw = _raf_decision(m, region, collapse=True)
            condensed = condense_tiers(raw, region.tier_groups)
        else:
            iv = _interval_decision(m, region)
            raw = RafValue(center=iv.mid, nonlinear_radius=iv.rad)
            condensed = raw
    else:
        raw = _raf_decision(m, region, collapse=False)
        condensed = (
            condense_tiers(raw, region.tier_groups) if region.oh_enabled else raw
        )
    return OutputAbstraction(raf=raw, condensed=condensed, range=raf_range(condensed))


def classify_range(rng: IntervalValue) -> frozenset[int]:
    if rng.hi < 0.0:
        return frozenset({-1})
    if rng.lo > 0.0:
        return frozenset({+1})
    return frozenset({-1, +1})


def abstract_classify(out: OutputAbstraction) -> frozenset[int]:
    """Over-approximated label set from the output range."""
    return classify_range(out.range)


def _refinement_ranges(
    m: SvmModel, x, spec: PerturbationSpec, domain: Domain, oh_enabled: bool
) -> tuple[OutputAbstraction, list[IntervalValue]]:
    """Primary output plus the ranges of every weaker level it must dominate."""
    schema = m.schema
    primary = abstract_decision(m, build_region(x, spec, schema, domain, oh_enabled))
    ranges = [primary.range]
    if domain is Domain.RAF or oh_enabled:
        interval_out = abstract_decision(
            m, build_region(x, spec, schema, Domain.INTERVAL, False)
        )
        ranges.append(interval_out.range)
    if domain is Domain.RAF and oh_enabled and spec.categories:
        int_oh_out = abstract_decision(
            m, build_region(x, spec, schema, Domain.INTERVAL, True)
        )
        ranges.append(int_oh_out.range)
    return primary, ranges


def verify_robust(
    m: SvmModel,
    x,
    spec: PerturbationSpec,
    domain: Domain = Domain.RAF,
    oh_enabled: bool = True,
) -> VerificationOutcome:
    """Sound robustness check of the concrete classifier over the region."""
    primary, ranges = _refinement_ranges(m, x, spec, domain, oh_enabled)
    met = ranges[0]
    for rng in ranges[1:]:
        nxt = interval_intersect(met, rng)
        if nxt is None:
            raise InvariantViolation(
                f"disjoint sound output ranges: {met} vs {rng}"
            )
        met = nxt
    labels = classify_range(met)
    concrete = classify(m, x)
    proved = labels == frozenset({concrete})
    return VerificationOutcome(
        labels=labels,
        proved_robust=proved,
        output=replace(primary, range=met),
    )


def verification_outcomes(
    m: SvmModel,
    data: LabeledDataset,
    spec: PerturbationSpec,
    domain: Domain = Domain.RAF,
    oh_enabled: bool = True,
    jobs: int = 1,
) -> list[VerificationOutcome]:
    if len(data) == 0:
        raise InputError("empty dataset")
    rows = list(data.X)
    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(
                pool.map(lambda row: verify_robust(m, row, spec, domain, oh_enabled), rows)
            )
    return [verify_robust(m, row, spec, domain, oh_enabled) for row in rows]


def robustness_score(
    m: SvmModel,
    data: LabeledDataset,
    spec: PerturbationSpec,
    domain: Domain = Domain.RAF,
    oh_enabled: bool = True,
    jobs: int = 1,
) -> float:
    """Fraction of samples proved robust: a lower bound on true robustness."""
    outcomes = verification_outcomes(m, data, spec, domain, oh_enabled, jobs)
    return sum(1 for o in outcomes if o.proved_robust) / len(outcomes)

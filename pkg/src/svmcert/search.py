"""Gradient-guided counterexample search with recursive box partitioning.

Each node abstracts the current box in the RAF domain, reads the per-symbol
linear coefficients as a search gradient, and probes the most promising
vertex.  If the probe fails the box is cut in half along one numeric axis
and both halves are searched depth-first, lower half before upper.

The cut axis is the most influential numeric feature among those not yet
cut on the current path; once every splittable axis has been cut the
exclusion set resets.  A pure most-influential choice can get stuck
re-splitting a single axis whose vertices never flip, while cycling axes
recovers the documented traces on the worked models.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .errors import InputError, InvariantViolation
from .fairness import SimilaritySpec, similarity_to_perturbation
from .model import LabeledDataset, SvmModel, classify
from .verifier import (
    AbstractRegion,
    Domain,
    PerturbationSpec,
    _make_region,
    _raf_decision,
    build_region,
    clipped_box,
    verify_robust,
)


@dataclass(frozen=True)
class SearchConfig:
    max_depth: int = 12
    min_region_fraction: float = 0.001
    wall_timeout: float | None = 1.0

    def __post_init__(self):
        if not (0.0 < self.min_region_fraction <= 1.0):
            raise InputError("min_region_fraction must lie in (0, 1]")
        if self.max_depth < 0:
            raise InputError("max_depth must be >= 0")


@dataclass(frozen=True)
class Counterexample:
    point: tuple[float, ...]
    label: int
    original_label: int
    depth_found: int


@dataclass(frozen=True)
class Cut:
    feature: int
    value: float
    depth: int


def _gradient(m: SvmModel, region: AbstractRegion) -> dict[int, float]:
    out = _raf_decision(m, region, collapse=False)
    return dict(out.linear)


def _candidate_from_gradient(
    m: SvmModel, region: AbstractRegion, direction: int, grad: dict[int, float]
) -> np.ndarray:
    point = np.array([v.center for v in region.vars], dtype=float)
    for feat, sym in region.numeric_symbols:
        rng = region.vars[feat]
        lo, hi = rng.center - rng.deviation, rng.center + rng.deviation
        g = direction * grad.get(sym, 0.0)
        # zero-gradient axes resolve to the lower corner, matching the
        # documented vertex choices on flat directions
        point[feat] = hi if g > 0.0 else lo
    for group in region.tier_groups:
        best = max(
            range(len(group.symbols)),
            key=lambda i: (direction * grad.get(group.symbols[i], 0.0), -i),
        )
        for i, feat in enumerate(group.member_features):
            point[feat] = 1.0 if i == best else 0.0
    return point


def vertex_candidate(m: SvmModel, region: AbstractRegion, direction: int) -> np.ndarray:
    """Most promising vertex of the region in the given sign direction.

    Numeric features move to the box side that pushes the output toward
    `direction`; a freed tier activates only its most influential member
    (ties to the lowest position).
    """
    if region.domain is not Domain.RAF:
        raise InputError("vertex search requires the RAF domain")
    if direction not in (-1, 1):
        raise InputError("direction must be -1 or +1")
    return _candidate_from_gradient(m, region, direction, _gradient(m, region))


def _validated(
    m: SvmModel,
    point: np.ndarray,
    x,
    spec: PerturbationSpec,
    original_label: int,
    depth: int,
) -> Counterexample:
    schema = m.schema
    schema.validate_point(point)
    for i in spec.numeric_features:
        lo, hi = clipped_box(x, i, spec.epsilon, schema)
        if not (lo - 1e-12 <= point[i] <= hi + 1e-12):
            raise InvariantViolation(
                f"counterexample leaves the region on feature {i}: {point[i]} not in [{lo}, {hi}]"
            )
    pinned_cats = set(schema.categories()) - set(spec.categories)
    for cat in pinned_cats:
        for i in schema.categories()[cat]:
            if point[i] != float(x[i]):
                raise InvariantViolation(f"counterexample moved pinned category {cat!r}")
    freed = set(spec.numeric_features) | {
        i for c in spec.categories for i in schema.categories()[c]
    }
    for i in range(schema.width):
        if i not in freed and point[i] != float(x[i]):
            raise InvariantViolation(f"counterexample moved pinned feature {i}")
    label = classify(m, point)
    if label == original_label:
        raise InvariantViolation("counterexample does not flip the label")
    return Counterexample(
        point=tuple(float(v) for v in point),
        label=label,
        original_label=original_label,
        depth_found=depth,
    )


def search(
    m: SvmModel,
    x,
    spec: PerturbationSpec,
    cfg: SearchConfig = SearchConfig(),
    trace: list[Cut] | None = None,
) -> Counterexample | None:
    """Look for a concrete point in the region with a flipped label.

    Returns the first counterexample found in a deterministic depth-first
    traversal, or None once depth, region-size or time budgets run out.
    Absence of a counterexample proves nothing.
    """
    schema = m.schema
    schema.validate_point(x)
    spec.validate(schema)
    original_label = classify(m, x)
    direction = -original_label
    deadline = (
        time.monotonic() + cfg.wall_timeout if cfg.wall_timeout is not None else None
    )
    boxes0 = {i: clipped_box(x, i, spec.epsilon, schema) for i in spec.numeric_features}
    original_width = {i: hi - lo for i, (lo, hi) in boxes0.items()}
    freed_cats = tuple(spec.categories)

    def splittable(feat: int, boxes: dict[int, tuple[float, float]]) -> bool:
        lo, hi = boxes[feat]
        w0 = original_width[feat]
        return w0 > 0.0 and 0.5 * (hi - lo) >= cfg.min_region_fraction * w0

    def recurse(
        boxes: dict[int, tuple[float, float]],
        used: frozenset[int],
        depth: int,
    ) -> Counterexample | None:
        if deadline is not None and time.monotonic() > deadline:
            return None
        region = _make_region(x, boxes, freed_cats, schema, Domain.RAF, False)
        grad = _gradient(m, region)
        cand = _candidate_from_gradient(m, region, direction, grad)
        if classify(m, cand) != original_label:
            return _validated(m, cand, x, spec, original_label, depth)
        if depth >= cfg.max_depth:
            return None
        options = [i for i in boxes if splittable(i, boxes)]
        if not options:
            return None
        pool = [i for i in options if i not in used]
        if not pool:
            used = frozenset()
            pool = options
        feat = max(pool, key=lambda i: (abs(grad.get(i, 0.0)), -i))
        lo, hi = boxes[feat]
        mid = 0.5 * (lo + hi)
        if trace is not None:
            trace.append(Cut(feature=feat, value=mid, depth=depth))
        child_used = used | {feat}
        for half in ((lo, mid), (mid, hi)):
            child = dict(boxes)
            child[feat] = half
            found = recurse(child, child_used, depth + 1)
            if found is not None:
                return found
        return None

    return recurse(boxes0, frozenset(), 0)


def fairness_upper_bound(
    m: SvmModel,
    data: LabeledDataset,
    s: SimilaritySpec,
    cfg: SearchConfig = SearchConfig(),
    domain: Domain = Domain.RAF,
    oh_enabled: bool = True,
) -> float:
    """1 minus the fraction of samples with a concrete fairness violation.

    Samples already proved robust are skipped; a proved sample can never
    yield a counterexample.
    """
    if len(data) == 0:
        raise InputError("empty dataset")
    spec = similarity_to_perturbation(s, m.schema)
    found = 0
    for row in data.X:
        outcome = verify_robust(m, row, spec, domain, oh_enabled)
        if outcome.proved_robust:
            continue
        if search(m, row, spec, cfg) is not None:
            found += 1
    return 1.0 - found / len(data)

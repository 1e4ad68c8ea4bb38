"""Shared builders and sampling oracles for the test suite."""

from __future__ import annotations

import math

import numpy as np

from svmcert import (
    Domain,
    FeatureSchema,
    IntervalValue,
    KernelSpec,
    NumericFeature,
    PerturbationSpec,
    SvmModel,
    TierFeature,
)
from svmcert.verifier import clipped_box


def unit_numeric(*names: str) -> list[NumericFeature]:
    return [NumericFeature(n, IntervalValue(0.0, 1.0)) for n in names]


def tier(category: str, *names: str) -> list[TierFeature]:
    k = len(names)
    return [TierFeature(n, category, i + 1, k) for i, n in enumerate(names)]


def numeric_schema(d: int, lo: float = 0.0, hi: float = 1.0) -> FeatureSchema:
    return FeatureSchema(
        tuple(NumericFeature(f"x{i+1}", IntervalValue(lo, hi)) for i in range(d))
    )


def linear_model_from_weights(w, bias: float, schema: FeatureSchema) -> SvmModel:
    """Two support vectors whose weighted difference equals w."""
    w = np.asarray(w, dtype=float)
    center = np.full_like(w, 0.5)
    sv = np.stack([center + 0.5 * w, center - 0.5 * w])
    return SvmModel(KernelSpec.linear(), sv, np.array([1.0, -1.0]), bias, schema)


def example1_model() -> SvmModel:
    schema = FeatureSchema((
        NumericFeature("x1", IntervalValue(-1.0, 1.0)),
        NumericFeature("x2", IntervalValue(-1.0, 1.0)),
    ))
    return SvmModel(
        KernelSpec.linear(),
        np.array([[-0.5, 1.0], [0.5, -1.0]]),
        np.array([-0.5, 0.5]),
        0.0,
        schema,
    )


def parabola_model() -> SvmModel:
    """Degree-2 polynomial model whose primal form is 2*x1^2 + 2*(2+sqrt2)*x2 + 1."""
    schema = FeatureSchema((
        NumericFeature("x1", IntervalValue(-1.0, 1.0)),
        NumericFeature("x2", IntervalValue(-1.0, 1.0)),
    ))
    return SvmModel(
        KernelSpec.polynomial(1.0, 2),
        np.array([[0.0, -math.sqrt(2.0)], [-1.0, 1.0], [1.0, 1.0]]),
        np.array([-1.0, 1.0, 1.0]),
        0.0,
        schema,
    )


def random_model(rng: np.random.Generator, kernel_kind: str, with_category: bool) -> SvmModel:
    if with_category:
        d_num = int(rng.integers(1, 3))
        k = int(rng.integers(2, 4))
        feats = unit_numeric(*[f"x{i+1}" for i in range(d_num)]) + tier(
            "cat", *[f"cat_{i+1}" for i in range(k)]
        )
        schema = FeatureSchema(tuple(feats))
    else:
        schema = numeric_schema(int(rng.integers(1, 5)))
    d = schema.width
    n = int(rng.integers(1, 6))
    sv = rng.uniform(0.0, 1.0, size=(n, d))
    alphas = rng.uniform(-2.0, 2.0, size=n)
    bias = float(rng.uniform(-1.0, 1.0))
    if kernel_kind == "linear":
        kernel = KernelSpec.linear()
    elif kernel_kind == "polynomial":
        kernel = KernelSpec.polynomial(float(rng.choice([0.0, 1.0])), int(rng.choice([2, 3])))
    else:
        kernel = KernelSpec.rbf(float(rng.uniform(0.1, 3.0)))
    return SvmModel(kernel, sv, alphas, bias, schema)


def random_legal_point(rng: np.random.Generator, schema: FeatureSchema) -> np.ndarray:
    x = np.zeros(schema.width)
    for i in schema.numeric_indices():
        f = schema.features[i]
        x[i] = rng.uniform(f.range.lo, f.range.hi)
    for members in schema.categories().values():
        x[members[int(rng.integers(0, len(members)))]] = 1.0
    return x


def random_perturbation(
    rng: np.random.Generator, schema: FeatureSchema
) -> PerturbationSpec:
    numeric = schema.numeric_indices()
    chosen = tuple(i for i in numeric if rng.random() < 0.7)
    if not chosen and numeric:
        chosen = (numeric[0],)
    cats = tuple(c for c in schema.categories() if rng.random() < 0.8)
    return PerturbationSpec.noise_cat(float(rng.uniform(0.0, 0.5)), chosen, cats)


def sample_region_points(
    rng: np.random.Generator,
    x,
    spec: PerturbationSpec,
    schema: FeatureSchema,
    n: int,
) -> np.ndarray:
    """n concrete points drawn from the perturbation region (all legal)."""
    pts = np.tile(np.asarray(x, dtype=float), (n, 1))
    for i in spec.numeric_features:
        lo, hi = clipped_box(x, i, spec.epsilon, schema)
        pts[:, i] = rng.uniform(lo, hi, size=n)
    cats = schema.categories()
    for c in spec.categories:
        members = cats[c]
        pts[:, members] = 0.0
        choice = rng.integers(0, len(members), size=n)
        pts[np.arange(n), np.asarray(members)[choice]] = 1.0
    return pts


def modes() -> list[tuple[Domain, bool]]:
    return [
        (Domain.INTERVAL, False),
        (Domain.INTERVAL, True),
        (Domain.RAF, False),
        (Domain.RAF, True),
    ]

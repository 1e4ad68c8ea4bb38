"""Deterministic synthetic tables for bundle generation and tests."""

from __future__ import annotations

import numpy as np

from .preprocess import Table


def example1_table(n: int = 200, seed: int = 0) -> Table:
    """Two features in [-1, 1] labeled by the toy separator 0.5*x1 - x2."""
    rng = np.random.default_rng(seed)
    X = rng.uniform(-1.0, 1.0, size=(n, 2))
    y = np.where(0.5 * X[:, 0] - X[:, 1] >= 0.0, 1, -1)
    return Table(
        numeric_names=["x1", "x2"],
        numeric=X,
        categorical_names=[],
        categorical=[],
        labels=y,
    )


def compas_like_table(n: int = 500, seed: int = 0) -> Table:
    """Recidivism-style table: 7 numeric columns on heterogeneous raw scales
    plus one 3-valued sensitive category, with well-separated feature
    effects so importance rankings are stable."""
    rng = np.random.default_rng(seed)
    priors = rng.poisson(3.0, size=n).astype(float)
    juv_fel = rng.poisson(0.4, size=n).astype(float)
    juv_misd = rng.poisson(0.7, size=n).astype(float)
    age = rng.uniform(18.0, 70.0, size=n)
    days_screen = rng.uniform(0.0, 30.0, size=n)
    length_stay = rng.exponential(12.0, size=n)
    charge_degree = rng.uniform(0.0, 1.0, size=n)
    race = [str(rng.choice(["groupA", "groupB", "groupC"])) for _ in range(n)]

    numeric = np.column_stack(
        [priors, juv_fel, juv_misd, age, days_screen, length_stay, charge_degree]
    )
    names = [
        "priors_count",
        "juv_fel_count",
        "juv_misd_count",
        "age",
        "days_b_screening",
        "length_of_stay",
        "charge_degree",
    ]
    # effects decay by column so rankings have clear gaps
    scaled = (numeric - numeric.min(axis=0)) / (
        numeric.max(axis=0) - numeric.min(axis=0)
    )
    weights = np.array([2.2, 1.55, 1.05, -0.7, 0.45, 0.28, 0.12])
    race_shift = np.array([0.15 if r == "groupA" else -0.1 for r in race])
    score = scaled @ weights + race_shift + rng.normal(0.0, 0.25, size=n)
    y = np.where(score >= np.median(score), 1, -1)
    return Table(
        numeric_names=names,
        numeric=numeric,
        categorical_names=["race"],
        categorical=[race],
        labels=y,
    )

"""Reference permutation importance via scikit-learn's implementation."""

from __future__ import annotations

import numpy as np
from sklearn.inspection import permutation_importance

from .export import ExportBundle


def reference_pfi(
    bundle: ExportBundle, seed: int = 0, n_repeat: int = 10
) -> dict[str, float]:
    """Mean accuracy drop per column on the bundle's train split.

    Columns are shuffled independently (the library's convention), so tier
    member columns each get their own score; ranking comparisons against the
    engine are therefore made on the numeric columns.
    """
    pre = bundle.pre
    result = permutation_importance(
        bundle.svc,
        pre.train.X,
        pre.train.y,
        n_repeats=n_repeat,
        random_state=seed,
    )
    return {
        name: float(result.importances_mean[i])
        for i, name in enumerate(pre.feature_names)
    }


def ranking(values: dict[str, float], names: list[str]) -> list[str]:
    """Names ordered by descending importance, ties broken by list order."""
    order = sorted(range(len(names)), key=lambda i: (-values[names[i]], i))
    return [names[i] for i in order]

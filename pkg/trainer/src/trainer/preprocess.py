"""Raw tables and the preprocessing pipeline (one-hot + min/max scaling)."""

from __future__ import annotations

import urllib.error
import urllib.request
from dataclasses import dataclass, field

import numpy as np

PUBLIC_SOURCES = {
    "adult": "https://archive.ics.uci.edu/ml/machine-learning-databases/adult/adult.data",
    "german": "https://archive.ics.uci.edu/ml/machine-learning-databases/statlog/german/german.data",
    "crime": "https://archive.ics.uci.edu/ml/machine-learning-databases/communities/communities.data",
    "compas": "https://raw.githubusercontent.com/propublica/compas-analysis/master/compas-scores-two-years.csv",
}

ACCESS_RESTRICTED = {"health"}


@dataclass
class Table:
    """Raw dataset: named columns, categorical values still symbolic."""

    numeric_names: list[str]
    numeric: np.ndarray  # (n, len(numeric_names))
    categorical_names: list[str]
    categorical: list[list[str]]  # per column, n entries
    labels: np.ndarray  # (n,) in {-1, +1}

    def __len__(self) -> int:
        return len(self.labels)


@dataclass
class ProcessedSplit:
    X: np.ndarray
    y: np.ndarray


@dataclass
class PreprocessResult:
    dataset: str
    feature_names: list[str]  # numeric names then tier member names
    numeric_names: list[str]
    categories: dict[str, list[str]]  # category -> member feature names
    train: ProcessedSplit | None
    test: ProcessedSplit | None
    manifest: dict = field(default_factory=dict)
    skipped: bool = False
    note: str = ""


def _try_download(name: str, timeout: float) -> bytes | None:
    url = PUBLIC_SOURCES[name]
    try:
        with urllib.request.urlopen(url, timeout=timeout) as resp:
            return resp.read()
    except (urllib.error.URLError, OSError, ValueError):
        return None


def encode_and_scale(table: Table) -> tuple[np.ndarray, list[str], dict[str, list[str]], dict]:
    """One-hot encode categoricals and min/max scale numerics into [0, 1].

    Returns the matrix, the feature names in order, the tier layout, and the
    scaler parameters for the manifest.
    """
    n = len(table)
    blocks = []
    names: list[str] = []
    scaler: dict[str, dict[str, float]] = {}
    for j, col in enumerate(table.numeric_names):
        vals = table.numeric[:, j].astype(float)
        lo, hi = float(vals.min()), float(vals.max())
        span = hi - lo if hi > lo else 1.0
        blocks.append(((vals - lo) / span).reshape(n, 1))
        names.append(col)
        scaler[col] = {"min": lo, "max": hi}
    categories: dict[str, list[str]] = {}
    for c, col in enumerate(table.categorical_names):
        values = sorted(set(table.categorical[c]))
        if len(values) < 2:
            raise ValueError(f"categorical column {col!r} has fewer than 2 values")
        member_names = [f"{col}_{v}" for v in values]
        block = np.zeros((n, len(values)))
        index = {v: k for k, v in enumerate(values)}
        for row, v in enumerate(table.categorical[c]):
            block[row, index[v]] = 1.0
        blocks.append(block)
        names.extend(member_names)
        categories[col] = member_names
    X = np.hstack(blocks) if blocks else np.zeros((n, 0))
    manifest = {
        "steps": [
            "min/max scale numeric columns into [0, 1]",
            "one-hot encode categorical columns (one tier per category)",
        ],
        "scaler": scaler,
    }
    return X, names, categories, manifest


def split(X: np.ndarray, y: np.ndarray, test_fraction: float, seed: int):
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(y))
    n_test = max(1, int(round(test_fraction * len(y))))
    test_idx, train_idx = order[:n_test], order[n_test:]
    return (
        ProcessedSplit(X=X[train_idx], y=y[train_idx]),
        ProcessedSplit(X=X[test_idx], y=y[test_idx]),
    )


def preprocess(
    dataset: str,
    table: Table | None = None,
    test_fraction: float = 0.25,
    seed: int = 0,
    download_timeout: float = 5.0,
) -> PreprocessResult:
    """Produce scaled, one-hot encoded train/test splits for a dataset.

    Synthetic tables are passed in directly.  Public datasets are fetched
    best-effort; a failed download (or an access-restricted source) does not
    abort the batch, it yields a skipped result with a manifest note.
    """
    name = dataset.lower()
    if table is None:
        if name in ACCESS_RESTRICTED:
            return PreprocessResult(
                dataset=name, feature_names=[], numeric_names=[], categories={},
                train=None, test=None, skipped=True,
                note="access-restricted source; excluded from the batch",
                manifest={"exclusion": "access-restricted"},
            )
        if name not in PUBLIC_SOURCES:
            raise ValueError(f"unknown dataset {dataset!r} and no table supplied")
        raw = _try_download(name, download_timeout)
        if raw is None:
            return PreprocessResult(
                dataset=name, feature_names=[], numeric_names=[], categories={},
                train=None, test=None, skipped=True,
                note=f"download failed for {PUBLIC_SOURCES[name]}",
                manifest={"exclusion": "download failed"},
            )
        raise NotImplementedError(
            f"parser for the raw {name} export is not bundled; supply a Table"
        )
    X, names, categories, manifest = encode_and_scale(table)
    train, test = split(X, table.labels, test_fraction, seed)
    manifest.update({"dataset": name, "seed": seed, "test_fraction": test_fraction})
    return PreprocessResult(
        dataset=name,
        feature_names=names,
        numeric_names=list(table.numeric_names),
        categories=categories,
        train=train,
        test=test,
        manifest=manifest,
    )

"""Train scikit-learn SVCs and export them in the engine's file formats.

The engine is a separate program; everything it needs is written to disk
(model JSON, dataset CSV) and the agreement probe talks to it through its
command-line interface only.
"""

from __future__ import annotations

import csv
import json
import platform
import shutil
import subprocess
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import sklearn
from sklearn.svm import SVC

from .preprocess import PreprocessResult

AGREEMENT_TOL = 1e-9


class ExportError(RuntimeError):
    """Training or export could not produce a faithful bundle."""


def engine_command() -> list[str]:
    exe = shutil.which("svmcert")
    if exe:
        return [exe]
    return [sys.executable, "-m", "svmcert.cli"]


def schema_json(pre: PreprocessResult) -> dict:
    features = []
    for name in pre.numeric_names:
        features.append({"name": name, "kind": "numeric", "range": [0.0, 1.0]})
    for category, members in pre.categories.items():
        for pos, member in enumerate(members, start=1):
            features.append({
                "name": member,
                "kind": "tier",
                "category": category,
                "position": pos,
                "width": len(members),
            })
    return {"features": features}


def svc_to_model_json(svc: SVC, pre: PreprocessResult) -> dict:
    kind = svc.kernel
    if kind == "linear":
        kernel = {"kind": "linear"}
    elif kind == "poly":
        if svc.gamma != 1.0:
            raise ExportError("polynomial export requires gamma pinned to 1.0")
        kernel = {"kind": "polynomial", "c": float(svc.coef0), "degree": int(svc.degree)}
    elif kind == "rbf":
        kernel = {"kind": "rbf", "gamma": float(svc._gamma)}
    else:
        raise ExportError(f"unsupported kernel {kind!r}")
    if list(svc.classes_) != [-1, 1]:
        raise ExportError(f"expected binary classes [-1, 1], got {list(svc.classes_)}")
    return {
        "kernel": kernel,
        "bias": float(-svc.intercept_[0]),
        "alphas": [float(a) for a in svc.dual_coef_[0]],
        "support_vectors": [[float(v) for v in sv] for sv in svc.support_vectors_],
        "schema": schema_json(pre),
    }


def write_dataset_csv(path: Path, X: np.ndarray, y: np.ndarray, names: list[str]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(names) + ["label"])
        for row, label in zip(X, y):
            writer.writerow([repr(float(v)) for v in row] + [int(label)])


def engine_decision_values(model_path: Path, X: np.ndarray, y: np.ndarray, names: list[str]) -> np.ndarray:
    """Decision values as computed by the engine, via its eval command."""
    with tempfile.TemporaryDirectory() as tmp:
        data_path = Path(tmp) / "probe.csv"
        out_path = Path(tmp) / "report.json"
        write_dataset_csv(data_path, X, y, names)
        proc = subprocess.run(
            engine_command() + [
                "eval", "--model", str(model_path), "--data", str(data_path),
                "--out", str(out_path),
            ],
            capture_output=True,
            text=True,
        )
        if proc.returncode != 0:
            raise ExportError(
                f"engine rejected the exported bundle (exit {proc.returncode}): {proc.stderr.strip()}"
            )
        report = json.loads(out_path.read_text())
    return np.array([row["decision_value"] for row in report["samples"]])


def legal_probe_points(pre: PreprocessResult, n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    d = len(pre.feature_names)
    X = np.zeros((n, d))
    for j, _ in enumerate(pre.numeric_names):
        X[:, j] = rng.uniform(0.0, 1.0, size=n)
    offset = len(pre.numeric_names)
    for members in pre.categories.values():
        k = len(members)
        choice = rng.integers(0, k, size=n)
        X[np.arange(n), offset + choice] = 1.0
        offset += k
    return X


def probe_agreement(
    model_path: Path, svc: SVC, pre: PreprocessResult, n: int = 1000, seed: int = 99
) -> float:
    """Max |engine - scikit-learn| decision value over n legal probe points."""
    X = legal_probe_points(pre, n, seed)
    ours = svc.decision_function(X)
    labels = np.where(ours >= 0.0, 1, -1)
    theirs = engine_decision_values(model_path, X, labels, pre.feature_names)
    return float(np.max(np.abs(theirs - ours)))


@dataclass
class ExportBundle:
    name: str
    model_path: Path
    train_path: Path
    test_path: Path
    manifest_path: Path
    svc: SVC
    pre: PreprocessResult
    probe_deviation: float


def make_svc(kernel: str, hyperparams: dict) -> SVC:
    if kernel == "linear":
        return SVC(kernel="linear", C=hyperparams.get("C", 1.0))
    if kernel == "polynomial":
        return SVC(
            kernel="poly",
            C=hyperparams.get("C", 1.0),
            degree=hyperparams.get("degree", 3),
            coef0=hyperparams.get("coef0", 0.0),
            gamma=1.0,  # the exported form carries no kernel scale
        )
    if kernel == "rbf":
        return SVC(kernel="rbf", C=hyperparams.get("C", 1.0), gamma=hyperparams.get("gamma", 0.1))
    raise ExportError(f"unsupported kernel {kernel!r}")


def train_and_export(
    kernel: str,
    hyperparams: dict,
    pre: PreprocessResult,
    outdir: Path,
    name: str | None = None,
    seed: int = 0,
    probe_points: int = 1000,
) -> ExportBundle:
    """Fit an SVC, export the bundle, and verify decision-value agreement.

    Export is refused when training is degenerate (single-class data) or
    when the engine disagrees with scikit-learn beyond the tolerance on the
    probe points.
    """
    if pre.skipped or pre.train is None:
        raise ExportError(f"dataset {pre.dataset!r} was skipped: {pre.note}")
    if len(set(pre.train.y.tolist())) < 2:
        raise ExportError("training data contains a single class; export refused")
    name = name or f"{pre.dataset}_{kernel}"
    svc = make_svc(kernel, hyperparams)
    svc.fit(pre.train.X, pre.train.y)

    outdir.mkdir(parents=True, exist_ok=True)
    model_path = outdir / f"{name}_model.json"
    train_path = outdir / f"{name}_train.csv"
    test_path = outdir / f"{name}_test.csv"
    manifest_path = outdir / f"{name}_manifest.json"

    model_path.write_text(json.dumps(svc_to_model_json(svc, pre), indent=2) + "\n")
    write_dataset_csv(train_path, pre.train.X, pre.train.y, pre.feature_names)
    write_dataset_csv(test_path, pre.test.X, pre.test.y, pre.feature_names)

    deviation = probe_agreement(model_path, svc, pre, n=probe_points)
    if deviation > AGREEMENT_TOL:
        model_path.unlink()
        raise ExportError(
            f"probe agreement failed: max deviation {deviation:.3e} > {AGREEMENT_TOL:.0e}"
        )

    manifest = {
        "bundle": name,
        "dataset": pre.dataset,
        "kernel": kernel,
        "hyperparameters": hyperparams,
        "seed": seed,
        "probe": {"points": probe_points, "max_deviation": deviation},
        "preprocessing": pre.manifest,
        "versions": {
            "python": platform.python_version(),
            "numpy": np.__version__,
            "scikit-learn": sklearn.__version__,
        },
    }
    manifest_path.write_text(json.dumps(manifest, indent=2) + "\n")
    return ExportBundle(
        name=name,
        model_path=model_path,
        train_path=train_path,
        test_path=test_path,
        manifest_path=manifest_path,
        svc=svc,
        pre=pre,
        probe_deviation=deviation,
    )

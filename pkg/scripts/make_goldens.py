#!/usr/bin/env python3
"""Generate the golden models, datasets and frozen reports used by the tests.

Deterministic; outputs are committed under tests/golden/.  Rerunning must
reproduce the committed files byte for byte.
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from svmcert import (  # noqa: E402
    Domain,
    FeatureSchema,
    IntervalValue,
    KernelSpec,
    LabeledDataset,
    NumericFeature,
    PerturbationSpec,
    SimilaritySpec,
    SvmModel,
    TierFeature,
    afi,
    fairness_lower_bound,
    full_input_region,
    rank_compare,
    verify_robust,
)
from svmcert.model import decision_values  # noqa: E402
from svmcert.model_io import save_dataset, save_model  # noqa: E402

GOLDEN = ROOT / "tests" / "golden"


def unit_numeric(*names: str) -> list[NumericFeature]:
    return [NumericFeature(n, IntervalValue(0.0, 1.0)) for n in names]


def tier(category: str, *names: str) -> list[TierFeature]:
    k = len(names)
    return [TierFeature(n, category, i + 1, k) for i, n in enumerate(names)]


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


def cex_model() -> SvmModel:
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


def linear_from_weights(w: np.ndarray, bias: float, schema: FeatureSchema) -> SvmModel:
    center = np.full_like(w, 0.5)
    sv = np.stack([center + 0.5 * w, center - 0.5 * w])
    return SvmModel(KernelSpec.linear(), sv, np.array([1.0, -1.0]), bias, schema)


def lin7_bundle() -> tuple[SvmModel, LabeledDataset]:
    names = [f"f{i}" for i in range(1, 8)]
    schema = FeatureSchema(tuple(unit_numeric(*names)))
    w = np.array([0.06, 0.14, 0.26, 0.40, 0.55, 0.72, 0.90])
    rng = np.random.default_rng(7)
    X = rng.uniform(0.0, 1.0, size=(60, 7))
    bias = float(np.median(X @ w))
    model = linear_from_weights(w, bias, schema)
    y = np.where(decision_values(model, X) >= 0.0, 1, -1)
    return model, LabeledDataset(X=X, y=y)


def catmix_schema() -> FeatureSchema:
    feats = (
        unit_numeric("num1", "num2", "num3")
        + tier("color", "color_red", "color_green", "color_blue")
        + tier("size", "size_small", "size_large")
    )
    return FeatureSchema(tuple(feats))


def catmix_dataset(schema: FeatureSchema, n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    X = np.zeros((n, schema.width))
    X[:, :3] = rng.uniform(0.0, 1.0, size=(n, 3))
    for row in range(n):
        c = rng.integers(0, 3)
        X[row, 3 + c] = 1.0
        s = rng.integers(0, 2)
        X[row, 6 + s] = 1.0
    return X


def catmix_models(X: np.ndarray) -> dict[str, SvmModel]:
    schema = catmix_schema()
    w = np.array([0.5, -0.3, 0.8, 0.4, -0.2, 0.1, -0.35, 0.15])
    lin = linear_from_weights(w, 0.0, schema)
    lin = SvmModel(lin.kernel, lin.support_vectors, lin.alphas,
                   float(np.median(decision_values(lin, X) + lin.bias)), schema)

    sv_poly = np.array([
        [0.9, 0.1, 0.8, 1, 0, 0, 1, 0],
        [0.2, 0.7, 0.3, 0, 1, 0, 0, 1],
        [0.5, 0.5, 0.9, 0, 0, 1, 1, 0],
    ], dtype=float)
    al_poly = np.array([0.6, -0.5, 0.45])
    poly = SvmModel(KernelSpec.polynomial(1.0, 2), sv_poly, al_poly, 0.0, schema)
    poly = SvmModel(poly.kernel, sv_poly, al_poly,
                    float(np.median(decision_values(poly, X))), schema)

    sv_rbf = np.array([
        [0.8, 0.2, 0.9, 1, 0, 0, 0, 1],
        [0.1, 0.9, 0.2, 0, 1, 0, 1, 0],
        [0.6, 0.5, 0.7, 0, 0, 1, 0, 1],
        [0.3, 0.3, 0.1, 1, 0, 0, 1, 0],
    ], dtype=float)
    al_rbf = np.array([1.2, -1.0, 0.9, -0.7])
    rbf = SvmModel(KernelSpec.rbf(0.1), sv_rbf, al_rbf, 0.0, schema)
    rbf = SvmModel(rbf.kernel, sv_rbf, al_rbf,
                   float(np.median(decision_values(rbf, X))), schema)
    return {"linear": lin, "polynomial": poly, "rbf": rbf}


def check_lin7(model: SvmModel, data: LabeledDataset) -> None:
    report = afi(model, full_input_region(model.schema))
    instability = []
    for i in report.feature_indices:
        spec = PerturbationSpec.linf_noise(0.3, (i,))
        proved = sum(
            1 for row in data.X if verify_robust(model, row, spec).proved_robust
        )
        instability.append(1.0 - proved / len(data))
    lbs = [1.0 - v for v in instability]
    assert len(set(lbs)) == len(lbs), f"per-feature LBs not distinct: {lbs}"
    cmp_ = rank_compare(report.indices, instability)
    assert cmp_.spearman == 1.0, f"stability order mismatch: {cmp_}"
    print("lin7 per-feature LBs:", [round(v, 4) for v in lbs])


def check_orderings(models: dict[str, SvmModel], data: LabeledDataset) -> None:
    sim = SimilaritySpec("noise-cat", epsilon=0.05, categories=("color",))
    for name, model in models.items():
        lbs = {}
        for domain, oh in (
            (Domain.INTERVAL, False),
            (Domain.INTERVAL, True),
            (Domain.RAF, False),
            (Domain.RAF, True),
        ):
            key = f"{domain.value}{'+oh' if oh else ''}"
            lbs[key] = fairness_lower_bound(model, data, sim, domain, oh)
        print(f"catmix {name}: {lbs}")
        assert lbs["interval"] <= lbs["interval+oh"] <= lbs["raf+oh"], lbs
        assert lbs["raf"] <= lbs["raf+oh"], lbs
        assert lbs["interval"] <= lbs["raf"], f"{name}: raf below interval: {lbs}"


def freeze_verify_report(tmp_model: Path, tmp_data: Path) -> None:
    from click.testing import CliRunner

    from svmcert.cli import main as cli_main

    out = GOLDEN / "catmix_rbf_verify_report.json"
    runner = CliRunner()
    result = runner.invoke(cli_main, [
        "verify",
        "--model", str(tmp_model),
        "--data", str(tmp_data),
        "--similarity", "noise-cat",
        "--epsilon", "0.05",
        "--sensitive", "color",
        "--domain", "raf",
        "--oh", "on",
        "--out", str(out),
    ])
    assert result.exit_code == 0, result.output
    report = json.loads(out.read_text())
    del report["timing"]
    report["model"]["path"] = tmp_model.name
    out.write_text(json.dumps(report, indent=2) + "\n")
    print("frozen verify report:", out.name, "lb =", report["aggregates"]["lb"])


def main() -> None:
    GOLDEN.mkdir(parents=True, exist_ok=True)

    save_model(example1_model(), GOLDEN / "example1_model.json")
    save_model(cex_model(), GOLDEN / "cex_model.json")

    lin7, lin7_data = lin7_bundle()
    save_model(lin7, GOLDEN / "lin7_model.json")
    save_dataset(lin7_data, lin7.schema, GOLDEN / "lin7_data.csv")
    check_lin7(lin7, lin7_data)

    schema = catmix_schema()
    X = catmix_dataset(schema, 50, seed=11)
    models = catmix_models(X)
    y = np.where(decision_values(models["rbf"], X) >= 0.0, 1, -1)
    data = LabeledDataset(X=X, y=y)
    save_dataset(data, schema, GOLDEN / "catmix_data.csv")
    for name, model in models.items():
        save_model(model, GOLDEN / f"catmix_{name}_model.json")
    check_orderings(models, data)

    freeze_verify_report(GOLDEN / "catmix_rbf_model.json", GOLDEN / "catmix_data.csv")
    print("goldens written to", GOLDEN)


if __name__ == "__main__":
    main()

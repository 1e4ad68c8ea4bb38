#!/usr/bin/env python3
"""Sweep kernel hyperparameters and record balanced accuracy vs fairness.

Trains one SVC per grid point on the recidivism-style synthetic table,
exports it, asks the engine for the verified fairness lower bound under the
noise-cat relation, and writes a CSV ready for plotting.

Usage: python trainer/scripts/hyperparam_sweep.py [--kernel rbf|polynomial] [--out sweep.csv]
"""

from __future__ import annotations

import argparse
import csv
import json
import subprocess
import sys
import tempfile
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from trainer import compas_like_table, preprocess, train_and_export  # noqa: E402
from trainer.export import ExportError, engine_command  # noqa: E402

GRIDS = {
    "rbf": [
        {"C": c, "gamma": g}
        for c in (0.05, 0.5, 5.0)
        for g in (0.005, 0.05, 0.5)
    ],
    "polynomial": [
        {"C": c, "degree": d, "coef0": b}
        for c in (0.01, 1.0)
        for d in (2, 3)
        for b in (1.0, 3.0)
    ],
}


def engine_verify(model_path: Path, data_path: Path) -> dict:
    with tempfile.TemporaryDirectory() as tmp:
        out = Path(tmp) / "report.json"
        proc = subprocess.run(
            engine_command() + [
                "verify", "--model", str(model_path), "--data", str(data_path),
                "--similarity", "noise-cat", "--epsilon", "0.05",
                "--sensitive", "race", "--out", str(out),
            ],
            capture_output=True, text=True,
        )
        if proc.returncode != 0:
            raise RuntimeError(proc.stderr)
        return json.loads(out.read_text())["aggregates"]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--kernel", choices=sorted(GRIDS), default="rbf")
    parser.add_argument("--out", type=Path, default=Path("sweep.csv"))
    args = parser.parse_args()

    pre = preprocess("compas-like", table=compas_like_table(seed=0), seed=0)
    rows = []
    with tempfile.TemporaryDirectory() as tmp:
        for i, params in enumerate(GRIDS[args.kernel]):
            try:
                bundle = train_and_export(
                    args.kernel, params, pre, Path(tmp) / f"p{i}", probe_points=200
                )
            except ExportError as exc:
                print(f"{params}: skipped ({exc})")
                continue
            agg = engine_verify(bundle.model_path, bundle.test_path)
            row = dict(params)
            row["balanced_accuracy"] = agg["balanced_accuracy"]
            row["fairness_lb"] = agg["lb"]
            rows.append(row)
            print(f"{params}: bal.acc={agg['balanced_accuracy']:.3f} fairness_lb={agg['lb']:.3f}")

    if rows:
        with open(args.out, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
            writer.writeheader()
            writer.writerows(rows)
        print(f"wrote {args.out}")


if __name__ == "__main__":
    main()

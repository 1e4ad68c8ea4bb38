"""Build the committed golden bundles: python -m trainer [outdir]."""

from __future__ import annotations

import json
import sys
from pathlib import Path

from .export import train_and_export
from .preprocess import preprocess
from .synth import compas_like_table, example1_table

# regularization / kernel settings used for the recidivism-style bundles
DEFAULT_HYPERPARAMS = {
    "linear": {"C": 1.0},
    "rbf": {"C": 0.05, "gamma": 0.01},
    "polynomial": {"C": 0.01, "degree": 3, "coef0": 3.0},
}


def main(outdir: Path) -> None:
    outdir.mkdir(parents=True, exist_ok=True)

    pre_ex1 = preprocess("example1", table=example1_table(seed=0), seed=0)
    bundle = train_and_export("linear", {"C": 10.0}, pre_ex1, outdir / "example1")
    print(f"example1 linear: probe deviation {bundle.probe_deviation:.2e}")

    pre = preprocess("compas-like", table=compas_like_table(seed=0), seed=0)
    for kernel, params in DEFAULT_HYPERPARAMS.items():
        bundle = train_and_export(kernel, params, pre, outdir / "compas_like")
        print(f"compas-like {kernel}: probe deviation {bundle.probe_deviation:.2e}")

    skipped = [preprocess(name) for name in ("adult", "german", "crime", "compas", "health")]
    notes = {r.dataset: r.note for r in skipped if r.skipped}
    (outdir / "skipped.json").write_text(json.dumps(notes, indent=2) + "\n")
    if notes:
        print("skipped public datasets:", ", ".join(sorted(notes)))


if __name__ == "__main__":
    target = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parents[2] / "bundles"
    main(target)

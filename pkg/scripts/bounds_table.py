#!/usr/bin/env python3
"""Fairness lower/upper bounds per kernel on the golden bundles.

Usage: python scripts/bounds_table.py [--depth N] [--epsilon E]
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from svmcert import (  # noqa: E402
    SearchConfig,
    SimilaritySpec,
    fairness_lower_bound,
    fairness_upper_bound,
)
from svmcert.model_io import load_dataset, load_model  # noqa: E402

GOLDEN = ROOT / "tests" / "golden"


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--depth", type=int, default=4)
    parser.add_argument("--epsilon", type=float, default=0.05)
    args = parser.parse_args()

    cfg = SearchConfig(max_depth=args.depth, wall_timeout=None)
    sim = SimilaritySpec("noise-cat", epsilon=args.epsilon, categories=("color",))
    data = None
    print(f"{'kernel':<12} {'LB':>8} {'UB':>8}")
    for kind in ("linear", "polynomial", "rbf"):
        model = load_model(GOLDEN / f"catmix_{kind}_model.json")
        if data is None:
            data = load_dataset(GOLDEN / "catmix_data.csv", model.schema)
        lb = fairness_lower_bound(model, data, sim)
        ub = fairness_upper_bound(model, data, sim, cfg)
        print(f"{kind:<12} {100 * lb:>7.1f}% {100 * ub:>7.1f}%")


if __name__ == "__main__":
    main()

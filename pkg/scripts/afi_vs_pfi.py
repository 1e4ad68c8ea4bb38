#!/usr/bin/env python3
"""Compare abstract and permutation feature importance on a golden bundle.

Orders the numeric features three ways: by per-feature verified fairness
(noise on one feature at a time), by abstract importance, and by permutation
importance; prints the rankings and their rank correlations.

Usage: python scripts/afi_vs_pfi.py [--bundle lin7|catmix_linear] [--epsilon E]
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from svmcert import (  # noqa: E402
    PerturbationSpec,
    afi,
    full_input_region,
    pfi,
    rank_compare,
    verify_robust,
)
from svmcert.importance import importance_ranks  # noqa: E402
from svmcert.model_io import load_dataset, load_model  # noqa: E402

GOLDEN = ROOT / "tests" / "golden"
DATA_FOR = {"lin7": "lin7_data.csv", "catmix_linear": "catmix_data.csv"}


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--bundle", choices=sorted(DATA_FOR), default="lin7")
    parser.add_argument("--epsilon", type=float, default=0.3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    model = load_model(GOLDEN / f"{args.bundle}_model.json")
    data = load_dataset(GOLDEN / DATA_FOR[args.bundle], model.schema)

    start = time.perf_counter()
    report = afi(model, full_input_region(model.schema))
    afi_time = time.perf_counter() - start

    start = time.perf_counter()
    pfi_values = pfi(model, data, n_repeat=10, seed=args.seed)
    pfi_time = time.perf_counter() - start

    names = [model.schema.features[i].name for i in report.feature_indices]
    instability = []
    for i in report.feature_indices:
        spec = PerturbationSpec.linf_noise(args.epsilon, (i,))
        proved = sum(1 for row in data.X if verify_robust(model, row, spec).proved_robust)
        instability.append(1.0 - proved / len(data))

    lb_rank = importance_ranks(instability)
    print(f"{'feature':<20} {'LB%':>7} {'stability-rank':>15} {'AFI-rank':>9} {'PFI-rank':>9}")
    afi_rank = importance_ranks(report.indices)
    pfi_rank = importance_ranks([pfi_values[n] for n in names])
    for j, name in enumerate(names):
        print(
            f"{name:<20} {100 * (1 - instability[j]):>6.1f}% {lb_rank[j]:>15} "
            f"{afi_rank[j]:>9} {pfi_rank[j]:>9}"
        )
    afi_corr = rank_compare(report.indices, instability)
    pfi_corr = rank_compare([pfi_values[n] for n in names], instability)
    print(f"\nAFI ({afi_time:.3f}s): spearman vs stability = {afi_corr.spearman:+.3f}")
    print(f"PFI ({pfi_time:.3f}s): spearman vs stability = {pfi_corr.spearman:+.3f}")


if __name__ == "__main__":
    main()

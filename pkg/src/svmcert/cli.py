"""Command-line interface.

Commands: verify (fairness lower bound), bounds (lower and upper bound),
importance (abstract importance, optional permutation baseline), eval
(concrete metrics).  Exit codes: 0 success, 2 input error, 3 internal
invariant violation.
"""

from __future__ import annotations

import sys
import time

import click
import numpy as np

from . import report as rep
from .errors import InputError, InvariantViolation
from .fairness import (
    SimilaritySpec,
    fairness_outcomes,
    similarity_to_perturbation,
)
from .importance import afi, importance_ranks, pfi, rank_compare
from .model import NumericFeature, balanced_accuracy, classify_many, decision_values
from .model_io import load_dataset, load_model, model_digest
from .search import SearchConfig, search
from .verifier import Domain, PerturbationSpec, full_input_region, verify_robust


def _fail(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _load(model_path: str, data_path: str | None):
    model = load_model(model_path)
    data = load_dataset(data_path, model.schema) if data_path else None
    return model, data


def _similarity(model, similarity: str, epsilon: float, sensitive: str | None):
    cats = tuple(s for s in (sensitive or "").split(",") if s)
    for c in cats:
        if c not in model.schema.categories():
            raise InputError(f"unknown sensitive category {c!r}")
    return SimilaritySpec(name=similarity, epsilon=epsilon, categories=cats)


def _common_header(command: str, model_path: str, sim: SimilaritySpec | None, domain: str, oh: bool):
    header = {
        "command": command,
        "model": {"path": model_path, "sha256": model_digest(model_path)},
    }
    if sim is not None:
        header["similarity"] = {
            "name": sim.name,
            "epsilon": sim.epsilon,
            "categories": list(sim.categories),
        }
    header["domain"] = domain
    header["oh"] = oh
    return header


shared_options = [
    click.option("--model", "model_path", required=True, type=click.Path(), help="model JSON file"),
    click.option("--domain", type=click.Choice(["interval", "raf"]), default="raf"),
    click.option("--oh", type=click.Choice(["on", "off"]), default="on"),
    click.option("--seed", type=int, default=0),
    click.option("--jobs", type=int, default=1),
    click.option("--out", "out_path", type=click.Path(), default=None, help="write the JSON report here"),
]

similarity_options = [
    click.option("--data", "data_path", required=True, type=click.Path(), help="dataset CSV file"),
    click.option("--similarity", type=click.Choice(["noise", "cat", "noise-cat"]), default="noise"),
    click.option("--epsilon", type=float, default=0.05),
    click.option("--sensitive", type=str, default=None, help="comma-separated sensitive categories"),
]


def _apply(options):
    def wrap(fn):
        for opt in reversed(options):
            fn = opt(fn)
        return fn

    return wrap


@click.group()
def main():
    """Abstract certification and explanation of binary SVMs."""


def _run(fn):
    start = time.perf_counter()
    try:
        report, out_path = fn()
    except InputError as exc:
        _fail(2, str(exc))
    except InvariantViolation as exc:
        _fail(3, f"internal invariant violation: {exc}")
    report["timing"] = {"seconds": time.perf_counter() - start}
    if out_path:
        rep.write_report(report, out_path)
    click.echo(rep.format_table(report))


@main.command()
@_apply(shared_options)
@_apply(similarity_options)
def verify(model_path, domain, oh, seed, jobs, out_path, data_path, similarity, epsilon, sensitive):
    """Per-sample fairness verdicts and the verified lower bound."""

    def body():
        model, data = _load(model_path, data_path)
        sim = _similarity(model, similarity, epsilon, sensitive)
        dom = Domain(domain)
        oh_on = oh == "on"
        outcomes = fairness_outcomes(model, data, sim, dom, oh_on, jobs=jobs)
        labels = classify_many(model, data.X)
        samples = []
        proved = 0
        for i, o in enumerate(outcomes):
            verdict = rep.VERDICT_PROVED if o.proved_robust else rep.VERDICT_UNKNOWN
            proved += o.proved_robust
            samples.append(
                rep.sample_row(i, int(labels[i]), verdict, (o.output.range.lo, o.output.range.hi))
            )
        bacc, acc = balanced_accuracy(model, data)
        report = _common_header("verify", model_path, sim, domain, oh_on)
        report["samples"] = samples
        report["aggregates"] = {
            "lb": proved / len(data),
            "accuracy": acc,
            "balanced_accuracy": bacc,
            "counts": {
                rep.VERDICT_PROVED: proved,
                rep.VERDICT_UNKNOWN: len(data) - proved,
            },
        }
        return report, out_path

    _run(body)


@main.command()
@_apply(shared_options)
@_apply(similarity_options)
@click.option("--max-depth", type=int, default=12)
@click.option("--min-fraction", type=float, default=0.001)
@click.option("--timeout", type=float, default=1.0, help="per-sample search budget in seconds; 0 disables")
def bounds(model_path, domain, oh, seed, jobs, out_path, data_path, similarity, epsilon,
           sensitive, max_depth, min_fraction, timeout):
    """Verified lower bound plus counterexample-search upper bound."""

    def body():
        model, data = _load(model_path, data_path)
        sim = _similarity(model, similarity, epsilon, sensitive)
        dom = Domain(domain)
        oh_on = oh == "on"
        cfg = SearchConfig(
            max_depth=max_depth,
            min_region_fraction=min_fraction,
            wall_timeout=timeout if timeout > 0 else None,
        )
        spec = similarity_to_perturbation(sim, model.schema)
        labels = classify_many(model, data.X)
        samples = []
        proved = unknown = found = 0
        for i, row in enumerate(data.X):
            outcome = verify_robust(model, row, spec, dom, oh_on)
            rng = (outcome.output.range.lo, outcome.output.range.hi)
            if outcome.proved_robust:
                proved += 1
                samples.append(rep.sample_row(i, int(labels[i]), rep.VERDICT_PROVED, rng))
                continue
            cex = search(model, row, spec, cfg)
            if cex is not None:
                found += 1
                samples.append(
                    rep.sample_row(
                        i, int(labels[i]), rep.VERDICT_CEX, rng,
                        counterexample=list(cex.point),
                    )
                )
            else:
                unknown += 1
                samples.append(rep.sample_row(i, int(labels[i]), rep.VERDICT_UNKNOWN, rng))
        bacc, acc = balanced_accuracy(model, data)
        report = _common_header("bounds", model_path, sim, domain, oh_on)
        report["search"] = {
            "max_depth": max_depth,
            "min_region_fraction": min_fraction,
            "wall_timeout": cfg.wall_timeout,
        }
        report["samples"] = samples
        report["aggregates"] = {
            "lb": proved / len(data),
            "ub": 1.0 - found / len(data),
            "accuracy": acc,
            "balanced_accuracy": bacc,
            "counts": {
                rep.VERDICT_PROVED: proved,
                rep.VERDICT_CEX: found,
                rep.VERDICT_UNKNOWN: unknown,
            },
        }
        return report, out_path

    _run(body)


@main.command()
@_apply(shared_options)
@click.option("--data", "data_path", type=click.Path(), default=None)
@click.option("--pfi", "with_pfi", is_flag=True, default=False)
@click.option("--n-repeat", type=int, default=10)
@click.option("--stability", is_flag=True, default=False,
              help="also rank features by per-feature verified fairness")
@click.option("--epsilon", type=float, default=0.05, help="epsilon for --stability runs")
@click.option("--use-condensed", is_flag=True, default=False)
def importance(model_path, domain, oh, seed, jobs, out_path, data_path, with_pfi,
               n_repeat, stability, epsilon, use_condensed):
    """Global abstract feature importance, scores and grades."""

    def body():
        if with_pfi and not data_path:
            raise InputError("--pfi requires --data")
        if stability and not data_path:
            raise InputError("--stability requires --data")
        model, data = _load(model_path, data_path)
        region = full_input_region(model.schema, Domain.RAF, oh == "on")
        result = afi(model, region, use_condensed=use_condensed)
        names = [model.schema.features[i].name for i in result.feature_indices]
        imp: dict = {
            "feature_names": names,
            "indices": list(result.indices),
            "tier_indices": {k: list(v) for k, v in result.tier_indices.items()},
            "mu": result.mu,
            "sigma": result.sigma,
            "scores": list(result.scores),
            "grades": list(result.grades),
            "ranks": list(importance_ranks(result.indices)),
            "afi_elapsed_seconds": result.elapsed,
        }
        if with_pfi:
            values = pfi(model, data, n_repeat=n_repeat, seed=seed)
            imp["pfi"] = values
            numeric_pfi = [values[n] for n in names]
            cmp_ = rank_compare(result.indices, numeric_pfi)
            imp["afi_vs_pfi"] = {
                "spearman": cmp_.spearman,
                "kendall": cmp_.kendall,
                "afi_ranks": list(cmp_.ranks_a),
                "pfi_ranks": list(cmp_.ranks_b),
            }
        if stability:
            instability = []
            for i in result.feature_indices:
                spec = PerturbationSpec.linf_noise(epsilon, (i,))
                proved = sum(
                    1
                    for row in data.X
                    if verify_robust(model, row, spec, Domain(domain), oh == "on").proved_robust
                )
                instability.append(1.0 - proved / len(data))
            imp["stability_lb"] = [1.0 - v for v in instability]
            cmp_ = rank_compare(result.indices, instability)
            imp["afi_vs_stability"] = {
                "spearman": cmp_.spearman,
                "kendall": cmp_.kendall,
                "afi_ranks": list(cmp_.ranks_a),
                "stability_ranks": list(cmp_.ranks_b),
            }
        report = _common_header("importance", model_path, None, domain, oh == "on")
        report["importance"] = imp
        report["aggregates"] = {}
        return report, out_path

    _run(body)


@main.command("eval")
@_apply(shared_options)
@click.option("--data", "data_path", required=True, type=click.Path())
def eval_cmd(model_path, domain, oh, seed, jobs, out_path, data_path):
    """Concrete decision values, labels and accuracy metrics."""

    def body():
        model, data = _load(model_path, data_path)
        values = decision_values(model, data.X)
        labels = np.where(values >= 0.0, 1, -1)
        samples = [
            rep.sample_row(i, int(labels[i]), rep.VERDICT_UNKNOWN, decision_value=float(values[i]))
            for i in range(len(data))
        ]
        bacc, acc = balanced_accuracy(model, data)
        report = _common_header("eval", model_path, None, domain, oh == "on")
        report["samples"] = samples
        report["aggregates"] = {"accuracy": acc, "balanced_accuracy": bacc}
        return report, out_path

    _run(body)


if __name__ == "__main__":
    main()

"""Feature importance: abstract (from the output RAF) and permutation-based.

The abstract measure reads the absolute per-symbol linear coefficients off
the analysis output, deliberately ignoring the accumulated nonlinear error
term.  It needs no dataset, no labels and no accuracy: it only looks at the
computation the classifier performs over a region of inputs.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .model import LabeledDataset, NumericFeature, SvmModel, classify_many
from .verifier import AbstractRegion, Domain, abstract_decision


@dataclass(frozen=True)
class ImportanceReport:
    feature_indices: tuple[int, ...]  # numeric features carrying a noise symbol
    indices: tuple[float, ...]  # importance per entry of feature_indices
    tier_indices: dict[str, tuple[float, ...]]  # per category, per member
    mu: float
    sigma: float
    scores: tuple[int, ...]
    grades: tuple[int, ...]
    elapsed: float

    def __post_init__(self):
        if any(v < 0.0 for v in self.indices):
            raise InputError("importance indices must be >= 0")
        if any(not (3 <= g <= 10) for g in self.grades):
            raise InputError("grades must lie in [3, 10]")


def afi_scores(
    indices,
) -> tuple[float, float, tuple[int, ...], tuple[int, ...]]:
    """Cluster raw importances into integer scores and grades in [3, 10].

    Standardizes against the sample mean / sample standard deviation and
    slices at unit steps (ceiling), then shifts by 6 and clips.  A
    degenerate all-equal distribution yields score 0 everywhere.
    """
    vals = [float(v) for v in indices]
    n = len(vals)
    if n < 2:
        raise InputError("need at least 2 importance indices to grade")
    mu = sum(vals) / n
    var = sum((v - mu) ** 2 for v in vals) / (n - 1)
    sigma = math.sqrt(var)
    if sigma == 0.0:
        scores = tuple(0 for _ in vals)
    else:
        scores = tuple(math.ceil((v - mu) / sigma) for v in vals)
    grades = tuple(max(min(10, s + 6), 3) for s in scores)
    return mu, sigma, scores, grades


def afi(m: SvmModel, region: AbstractRegion, use_condensed: bool = False) -> ImportanceReport:
    """Abstract feature importance over a region.

    A region abstracting the whole input space gives the global measure;
    narrower regions give local importance around a sample.  Tier member
    importances are always read off the raw (pre-condensation) output.
    """
    if region.domain is not Domain.RAF:
        raise InputError("importance extraction requires the RAF domain")
    start = time.perf_counter()
    out = abstract_decision(m, region)
    chosen = out.condensed if use_condensed else out.raf
    feature_indices = tuple(f for f, _ in region.numeric_symbols)
    indices = tuple(abs(chosen.coeff(s)) for _, s in region.numeric_symbols)
    tier_indices = {
        g.category: tuple(abs(out.raf.coeff(s)) for s in g.symbols)
        for g in region.tier_groups
    }
    if len(indices) >= 2:
        mu, sigma, scores, grades = afi_scores(indices)
    else:
        mu, sigma, scores, grades = (0.0, 0.0, (), ())
        if len(indices) == 1:
            mu = indices[0]
            scores, grades = (0,), (6,)
    elapsed = time.perf_counter() - start
    return ImportanceReport(
        feature_indices=feature_indices,
        indices=indices,
        tier_indices=tier_indices,
        mu=mu,
        sigma=sigma,
        scores=scores,
        grades=grades,
        elapsed=elapsed,
    )


def shuffle_blocks(schema) -> list[tuple[str, tuple[int, ...]]]:
    """Columns shuffled as one unit: numeric features alone, tiers together."""
    blocks: list[tuple[str, tuple[int, ...]]] = []
    done_cats = set()
    for i, f in enumerate(schema.features):
        if isinstance(f, NumericFeature):
            blocks.append((f.name, (i,)))
        elif f.category not in done_cats:
            done_cats.add(f.category)
            blocks.append((f.category, schema.categories()[f.category]))
    return blocks


def pfi(
    m: SvmModel, data: LabeledDataset, n_repeat: int = 10, seed: int = 0
) -> dict[str, float]:
    """Permutation feature importance: mean accuracy drop per shuffled block.

    One-hot tiers are permuted as whole blocks with a single row permutation
    so every shuffled row stays a legal encoding.  Deterministic for a fixed
    seed; each (block, repeat) pair draws from its own derived stream.
    """
    if len(data) == 0:
        raise InputError("empty dataset")
    if n_repeat < 1:
        raise InputError("n_repeat must be >= 1")
    base_acc = float(np.mean(classify_many(m, data.X) == data.y))
    out: dict[str, float] = {}
    for b, (name, cols) in enumerate(shuffle_blocks(m.schema)):
        drops = []
        for rep in range(n_repeat):
            rng = np.random.default_rng((seed, b, rep))
            perm = rng.permutation(len(data))
            shuffled = data.X.copy()
            shuffled[:, cols] = data.X[np.ix_(perm, cols)]
            acc = float(np.mean(classify_many(m, shuffled) == data.y))
            drops.append(base_acc - acc)
        out[name] = float(np.mean(drops))
    return out


@dataclass(frozen=True)
class RankComparison:
    spearman: float
    kendall: float
    ranks_a: tuple[int, ...]
    ranks_b: tuple[int, ...]


def importance_ranks(values) -> tuple[int, ...]:
    """1-based ranks by descending value; ties broken by lower index."""
    vals = [float(v) for v in values]
    order = sorted(range(len(vals)), key=lambda i: (-vals[i], i))
    ranks = [0] * len(vals)
    for pos, i in enumerate(order):
        ranks[i] = pos + 1
    return tuple(ranks)


def rank_compare(a, b) -> RankComparison:
    """Spearman rho and Kendall tau between two importance vectors."""
    if len(a) != len(b):
        raise InputError("importance vectors must have equal length")
    n = len(a)
    if n < 2:
        raise InputError("need at least 2 entries to correlate")
    ra = importance_ranks(a)
    rb = importance_ranks(b)
    d2 = sum((x - y) ** 2 for x, y in zip(ra, rb))
    spearman = 1.0 - 6.0 * d2 / (n * (n * n - 1))
    concordant = discordant = 0
    for i in range(n):
        for j in range(i + 1, n):
            s = (ra[i] - ra[j]) * (rb[i] - rb[j])
            if s > 0:
                concordant += 1
            elif s < 0:
                discordant += 1
    kendall = (concordant - discordant) / (n * (n - 1) / 2)
    return RankComparison(spearman=spearman, kendall=kendall, ranks_a=ra, ranks_b=rb)

"""Concrete SVM model: kernels, dual-form decision function, dataset metrics."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError
from .intervals import IntervalValue

UNIT_RANGE = IntervalValue(0.0, 1.0)


@dataclass(frozen=True)
class KernelSpec:
    kind: str  # "linear" | "polynomial" | "rbf"
    coeff: float = 0.0  # polynomial additive constant
    degree: int = 1
    gamma: float = 0.0

    def __post_init__(self):
        if self.kind not in ("linear", "polynomial", "rbf"):
            raise InputError(f"unknown kernel kind: {self.kind!r}")
        if self.kind == "polynomial" and self.degree < 1:
            raise InputError("polynomial degree must be >= 1")
        if self.kind == "rbf" and not self.gamma > 0.0:
            raise InputError("rbf gamma must be > 0")

    @classmethod
    def linear(cls) -> "KernelSpec":
        return cls("linear")

    @classmethod
    def polynomial(cls, coeff: float, degree: int) -> "KernelSpec":
        return cls("polynomial", coeff=coeff, degree=degree)

    @classmethod
    def rbf(cls, gamma: float) -> "KernelSpec":
        return cls("rbf", gamma=gamma)


@dataclass(frozen=True)
class NumericFeature:
    name: str
    range: IntervalValue = UNIT_RANGE


@dataclass(frozen=True)
class TierFeature:
    """One binary member of a one-hot encoded categorical attribute."""

    name: str
    category: str
    position: int  # 1-based position inside the tier
    width: int


Feature = NumericFeature | TierFeature


@dataclass(frozen=True)
class FeatureSchema:
    """Ordered feature descriptors plus the feature-to-tier lookup table."""

    features: tuple[Feature, ...]

    def __post_init__(self):
        names = [f.name for f in self.features]
        if len(set(names)) != len(names):
            raise InputError("duplicate feature names in schema")
        # tier members of one category must be contiguous, positions 1..k
        seen: dict[str, list[tuple[int, TierFeature]]] = {}
        for idx, f in enumerate(self.features):
            if isinstance(f, TierFeature):
                seen.setdefault(f.category, []).append((idx, f))
        for cat, members in seen.items():
            k = members[0][1].width
            if k < 2:
                raise InputError(f"category {cat!r} has width {k} < 2")
            if len(members) != k:
                raise InputError(
                    f"category {cat!r} has {len(members)} members, declared width {k}"
                )
            indices = [i for i, _ in members]
            if indices != list(range(indices[0], indices[0] + k)):
                raise InputError(f"category {cat!r} members are not contiguous")
            positions = [m.position for _, m in members]
            if positions != list(range(1, k + 1)):
                raise InputError(f"category {cat!r} positions must be 1..{k}")
            if any(m.width != k for _, m in members):
                raise InputError(f"category {cat!r} members disagree on width")

    @property
    def width(self) -> int:
        return len(self.features)

    def numeric_indices(self) -> tuple[int, ...]:
        return tuple(
            i for i, f in enumerate(self.features) if isinstance(f, NumericFeature)
        )

    def categories(self) -> dict[str, tuple[int, ...]]:
        """Category name -> member feature indices, in schema order."""
        out: dict[str, tuple[int, ...]] = {}
        for i, f in enumerate(self.features):
            if isinstance(f, TierFeature):
                out.setdefault(f.category, ())
                out[f.category] = out[f.category] + (i,)
        return out

    def feature_index(self, name: str) -> int:
        for i, f in enumerate(self.features):
            if f.name == name:
                return i
        raise InputError(f"unknown feature: {name!r}")

    def validate_point(self, x) -> None:
        """Reject vectors with the wrong width or illegal one-hot blocks."""
        if len(x) != self.width:
            raise InputError(f"sample has width {len(x)}, schema expects {self.width}")
        for cat, members in self.categories().items():
            block = [float(x[i]) for i in members]
            if any(v not in (0.0, 1.0) for v in block) or sum(block) != 1.0:
                raise InputError(f"illegal one-hot encoding for category {cat!r}: {block}")


@dataclass(frozen=True, eq=False)
class SvmModel:
    """Binary SVM in dual form; alphas store the combined weight c_i * y_i."""

    kernel: KernelSpec
    support_vectors: np.ndarray  # (n, d)
    alphas: np.ndarray  # (n,)
    bias: float
    schema: FeatureSchema

    def __post_init__(self):
        sv = np.asarray(self.support_vectors, dtype=float)
        al = np.asarray(self.alphas, dtype=float)
        if sv.ndim != 2 or sv.shape[0] < 1:
            raise InputError("support_vectors must be a nonempty 2-d array")
        if al.shape != (sv.shape[0],):
            raise InputError("alphas length must match number of support vectors")
        if sv.shape[1] != self.schema.width:
            raise InputError(
                f"support vectors have dimension {sv.shape[1]}, schema width is {self.schema.width}"
            )
        object.__setattr__(self, "support_vectors", sv)
        object.__setattr__(self, "alphas", al)

    @property
    def dim(self) -> int:
        return self.support_vectors.shape[1]

    def linear_weights(self) -> np.ndarray:
        """Primal weights sum_i alpha_i sv_i (meaningful for linear kernels)."""
        return self.alphas @ self.support_vectors


@dataclass(frozen=True, eq=False)
class LabeledDataset:
    X: np.ndarray  # (n, d)
    y: np.ndarray  # (n,) in {-1, +1}

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        y = np.asarray(self.y, dtype=int)
        if X.ndim != 2 or y.shape != (X.shape[0],):
            raise InputError("dataset arrays have inconsistent shapes")
        if not np.all(np.isin(y, (-1, 1))):
            raise InputError("labels must be -1 or +1")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)

    def __len__(self) -> int:
        return self.X.shape[0]


def kernel_eval(k: KernelSpec, x, z) -> float:
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    if x.shape != z.shape:
        raise InputError(f"kernel dimension mismatch: {x.shape} vs {z.shape}")
    if k.kind == "linear":
        return float(np.dot(x, z))
    if k.kind == "polynomial":
        return float((np.dot(x, z) + k.coeff) ** k.degree)
    diff = x - z
    return float(math.exp(-k.gamma * float(np.dot(diff, diff))))


def decision_value(m: SvmModel, z) -> float:
    z = np.asarray(z, dtype=float)
    if z.shape != (m.dim,):
        raise InputError(f"sample has dimension {z.shape}, model expects ({m.dim},)")
    total = 0.0
    for alpha, sv in zip(m.alphas, m.support_vectors):
        total += alpha * kernel_eval(m.kernel, sv, z)
    return total - m.bias


def decision_values(m: SvmModel, Z) -> np.ndarray:
    """Vectorized decision values for a batch of samples (rows of Z)."""
    Z = np.asarray(Z, dtype=float)
    if Z.ndim != 2 or Z.shape[1] != m.dim:
        raise InputError(f"batch has shape {Z.shape}, model expects (*, {m.dim})")
    sv = m.support_vectors
    if m.kernel.kind == "linear":
        K = Z @ sv.T
    elif m.kernel.kind == "polynomial":
        K = (Z @ sv.T + m.kernel.coeff) ** m.kernel.degree
    else:
        sq = (
            np.sum(Z**2, axis=1)[:, None]
            + np.sum(sv**2, axis=1)[None, :]
            - 2.0 * (Z @ sv.T)
        )
        K = np.exp(-m.kernel.gamma * np.maximum(sq, 0.0))
    return K @ m.alphas - m.bias


def classify(m: SvmModel, z) -> int:
    """Sign of the decision value; an exact zero counts as +1."""
    return 1 if decision_value(m, z) >= 0.0 else -1


def classify_many(m: SvmModel, Z) -> np.ndarray:
    return np.where(decision_values(m, Z) >= 0.0, 1, -1)


def balanced_accuracy(m: SvmModel, data: LabeledDataset) -> tuple[float, float]:
    """(balanced accuracy, plain accuracy) of the model on a dataset.

    Balanced accuracy is the mean of per-class recalls.  When a class is
    absent its recall term is defined as 0 and a warning is emitted.
    """
    if len(data) == 0:
        raise InputError("empty dataset")
    pred = classify_many(m, data.X)
    acc = float(np.mean(pred == data.y))
    recalls = []
    for label in (1, -1):
        mask = data.y == label
        if not mask.any():
            warnings.warn(f"class {label:+d} absent from dataset; recall term set to 0")
            recalls.append(0.0)
        else:
            recalls.append(float(np.mean(pred[mask] == label)))
    return 0.5 * (recalls[0] + recalls[1]), acc

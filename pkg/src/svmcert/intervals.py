"""Interval (hyperrectangle) abstract domain.

Values are plain closed intervals over the extended reals.  Infinite bounds
are accepted on input (unbounded feature ranges) but the analysis pipelines
only ever produce finite intervals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InputError


@dataclass(frozen=True)
class IntervalValue:
    """Closed interval [lo, hi], lo <= hi."""

    lo: float
    hi: float

    def __post_init__(self):
        if math.isnan(self.lo) or math.isnan(self.hi):
            raise InputError("interval bounds must not be NaN")
        if self.lo > self.hi:
            raise InputError(f"invalid interval: lo={self.lo} > hi={self.hi}")

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def rad(self) -> float:
        return 0.5 * (self.hi - self.lo)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return self.lo - tol <= x <= self.hi + tol

    def is_point(self) -> bool:
        return self.lo == self.hi


@dataclass(frozen=True)
class Hyperrectangle:
    """Box abstraction: one interval per dimension."""

    dims: tuple[IntervalValue, ...]

    def __len__(self) -> int:
        return len(self.dims)

    def contains(self, point, tol: float = 0.0) -> bool:
        return len(point) == len(self.dims) and all(
            iv.contains(v, tol) for iv, v in zip(self.dims, point)
        )


def interval_add(a: IntervalValue, b: IntervalValue) -> IntervalValue:
    return IntervalValue(a.lo + b.lo, a.hi + b.hi)


def interval_mul(a: IntervalValue, b: IntervalValue) -> IntervalValue:
    """Exact interval product: min/max over the four corner products."""
    corners = (a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi)
    return IntervalValue(min(corners), max(corners))


def interval_negate(a: IntervalValue) -> IntervalValue:
    return IntervalValue(-a.hi, -a.lo)


def interval_exp(a: IntervalValue) -> IntervalValue:
    return IntervalValue(math.exp(a.lo), math.exp(a.hi))


def interval_affine(a: IntervalValue, alpha: float, beta: float) -> IntervalValue:
    lo = alpha * a.lo + beta
    hi = alpha * a.hi + beta
    return IntervalValue(lo, hi) if lo <= hi else IntervalValue(hi, lo)


def interval_monotone_map(
    a: IntervalValue,
    f: str,
    *,
    alpha: float | None = None,
    beta: float | None = None,
) -> IntervalValue:
    """Apply a whitelisted monotone scalar map exactly to an interval.

    Supported tags: "exp", "negate", "affine" (the latter requires alpha
    and beta).  Anything else is rejected.
    """
    if f == "exp":
        return interval_exp(a)
    if f == "negate":
        return interval_negate(a)
    if f == "affine":
        if alpha is None or beta is None:
            raise InputError("affine map requires alpha and beta")
        return interval_affine(a, alpha, beta)
    raise InputError(f"unknown monotone function tag: {f!r}")


def interval_intersect(a: IntervalValue, b: IntervalValue) -> IntervalValue | None:
    """Intersection, or None when the intervals are disjoint."""
    lo = max(a.lo, b.lo)
    hi = min(a.hi, b.hi)
    if lo > hi:
        return None
    return IntervalValue(lo, hi)

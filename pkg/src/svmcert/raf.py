"""Reduced affine forms (RAF).

A RAF is  center + sum_i coeff_i * eps_i + nonlinear_radius * eps_r  where
every eps ranges over [-1, 1].  The indexed symbols eps_i carry relational
information (one per perturbed input feature, plus fresh symbols introduced
by tier condensation); eps_r is a single accumulator absorbing every
approximation made by nonlinear operations.  There is deliberately no fresh
error symbol per operation: accumulated error never regains relational
structure.

Affine operations (add, scale, shift) are exact on this representation.
Multiplication and exponentiation are sound over-approximations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

from .errors import InputError
from .intervals import IntervalValue


def _canonical(linear: Mapping[int, float]) -> dict[int, float]:
    # sparsity normalization: never store a zero coefficient, and fold -0.0
    out = {}
    for k in sorted(linear):
        v = linear[k]
        if v != 0.0:
            out[k] = v + 0.0
    return out


@dataclass(frozen=True)
class RafValue:
    center: float = 0.0
    linear: dict[int, float] = field(default_factory=dict)
    nonlinear_radius: float = 0.0
    is_top: bool = False

    def __post_init__(self):
        if self.is_top:
            object.__setattr__(self, "center", 0.0)
            object.__setattr__(self, "linear", {})
            object.__setattr__(self, "nonlinear_radius", 0.0)
            return
        if math.isnan(self.center) or math.isnan(self.nonlinear_radius):
            raise InputError("RAF fields must not be NaN")
        if self.nonlinear_radius < 0.0:
            raise InputError("nonlinear_radius must be >= 0")
        object.__setattr__(self, "center", self.center + 0.0)
        object.__setattr__(self, "nonlinear_radius", self.nonlinear_radius + 0.0)
        object.__setattr__(self, "linear", _canonical(self.linear))

    @classmethod
    def constant(cls, c: float) -> "RafValue":
        return cls(center=c)

    @classmethod
    def symbol(cls, center: float, index: int, coeff: float) -> "RafValue":
        return cls(center=center, linear={index: coeff})

    @classmethod
    def top(cls) -> "RafValue":
        return cls(is_top=True)

    def coeff(self, index: int) -> float:
        return self.linear.get(index, 0.0)

    @property
    def deviation(self) -> float:
        """Total radius: sum of |linear coefficients| plus nonlinear_radius."""
        return sum(abs(v) for v in self.linear.values()) + self.nonlinear_radius


def raf_range(a: RafValue) -> IntervalValue:
    """Concretization range [center - r, center + r]."""
    if a.is_top:
        raise InputError("top RAF has unbounded range")
    r = a.deviation
    return IntervalValue(a.center - r, a.center + r)


def raf_affine(a: RafValue, alpha: float, beta: float) -> RafValue:
    """alpha * a + beta, exact (coefficient-wise)."""
    if a.is_top:
        return a
    return RafValue(
        center=alpha * a.center + beta,
        linear={i: alpha * v for i, v in a.linear.items()},
        nonlinear_radius=abs(alpha) * a.nonlinear_radius,
    )


def raf_add(a: RafValue, b: RafValue) -> RafValue:
    """a + b, exact on shared symbols; error radii accumulate."""
    if a.is_top or b.is_top:
        return RafValue.top()
    linear = dict(a.linear)
    for i, v in b.linear.items():
        linear[i] = linear.get(i, 0.0) + v
    return RafValue(
        center=a.center + b.center,
        linear=linear,
        nonlinear_radius=a.nonlinear_radius + b.nonlinear_radius,
    )


def raf_mul_baseline(a: RafValue, b: RafValue) -> RafValue:
    """Reference product rule, kept as the tightness yardstick.

    Center a0*b0, linear coefficients a0*b_i + b0*a_i, and an error radius
    |a0|*b_r + |b0|*a_r + R_a*R_b where R is the operand's deviation
    ignoring its center.  The R_a*R_b term bounds the whole bilinear
    residue, so the result is sound for any assignment of the shared
    symbols.
    """
    if a.is_top or b.is_top:
        return RafValue.top()
    linear = {i: a.center * v for i, v in b.linear.items()}
    for i, v in a.linear.items():
        linear[i] = linear.get(i, 0.0) + b.center * v
    radius = (
        abs(a.center) * b.nonlinear_radius
        + abs(b.center) * a.nonlinear_radius
        + a.deviation * b.deviation
    )
    return RafValue(center=a.center * b.center, linear=linear, nonlinear_radius=radius)


def raf_mul(a: RafValue, b: RafValue) -> RafValue:
    """Sound product of two RAFs, tightened on the shared-symbol diagonal.

    Same affine part as the baseline rule, but each diagonal term
    a_i * b_i * eps_i^2 is enclosed by eps_i^2 in [0, 1]: half its weight
    moves into the center and only the other half stays in the error
    radius.  The radius therefore never exceeds the baseline's, and the
    resulting range is contained in the baseline's range.
    """
    if a.is_top or b.is_top:
        return RafValue.top()
    linear = {i: a.center * v for i, v in b.linear.items()}
    for i, v in a.linear.items():
        linear[i] = linear.get(i, 0.0) + b.center * v
    diag = 0.0
    diag_abs = 0.0
    for i, v in a.linear.items():
        if i in b.linear:
            d = v * b.linear[i]
            diag += d
            diag_abs += abs(d)
    radius = (
        abs(a.center) * b.nonlinear_radius
        + abs(b.center) * a.nonlinear_radius
        + a.deviation * b.deviation
        - 0.5 * diag_abs
    )
    return RafValue(
        center=a.center * b.center + 0.5 * diag,
        linear=linear,
        nonlinear_radius=max(radius, 0.0),
    )


def raf_exp(a: RafValue, scale: float, method: str = "chebyshev") -> RafValue:
    """Sound abstraction of u -> exp(scale * u) on the range of `a`.

    The default minimax (Chebyshev) linearization uses the secant slope over
    [lo, hi], with the intercept centered so the residue is symmetric; the
    residue bound goes into nonlinear_radius.  This keeps every per-symbol
    linear coefficient alive (scaled by the slope), which downstream
    importance extraction depends on.

    method="interval" collapses to the exact interval image instead,
    dropping all relational information.  Debugging aid only.
    """
    if a.is_top:
        return a
    if scale == 0.0:
        return RafValue.constant(1.0)
    rng = raf_range(a)
    lo, hi = rng.lo, rng.hi
    if lo == hi:
        return RafValue.constant(math.exp(scale * lo))

    f_lo = math.exp(scale * lo)
    f_hi = math.exp(scale * hi)

    if method == "interval":
        m, mx = (f_lo, f_hi) if f_lo <= f_hi else (f_hi, f_lo)
        return RafValue(center=0.5 * (m + mx), nonlinear_radius=0.5 * (mx - m))
    if method != "chebyshev":
        raise InputError(f"unknown raf_exp method: {method!r}")

    slope = (f_hi - f_lo) / (hi - lo)
    # exp(scale*u) is convex, so the chord lies above the curve; the largest
    # gap is at the tangency point u* with f'(u*) = slope.
    u_star = math.log(slope / scale) / scale
    u_star = min(max(u_star, lo), hi)
    gap = f_lo + slope * (u_star - lo) - math.exp(scale * u_star)
    if gap < 0.0:
        gap = 0.0
    zeta = f_lo - slope * lo - 0.5 * gap
    out = raf_affine(a, slope, zeta)
    return RafValue(
        center=out.center,
        linear=out.linear,
        nonlinear_radius=out.nonlinear_radius + 0.5 * gap,
    )


def raf_collapse(a: RafValue, keep: frozenset[int] = frozenset()) -> RafValue:
    """Fold every linear coefficient not in `keep` into nonlinear_radius.

    Preserves the range while deliberately discarding relational structure;
    used to emulate interval-precision analyses inside the RAF pipeline.
    """
    if a.is_top:
        return a
    kept = {}
    folded = 0.0
    for i, v in a.linear.items():
        if i in keep:
            kept[i] = v
        else:
            folded += abs(v)
    if folded == 0.0:
        return a
    return RafValue(
        center=a.center, linear=kept, nonlinear_radius=a.nonlinear_radius + folded
    )

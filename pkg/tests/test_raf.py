import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from svmcert.errors import InputError
from svmcert.raf import (
    RafValue,
    raf_add,
    raf_affine,
    raf_collapse,
    raf_exp,
    raf_mul,
    raf_mul_baseline,
    raf_range,
)

coeff = st.floats(min_value=-100, max_value=100, allow_nan=False)


@st.composite
def rafs(draw, max_symbols=4):
    center = draw(coeff)
    n = draw(st.integers(0, max_symbols))
    linear = {i: draw(coeff) for i in range(n)}
    radius = draw(st.floats(min_value=0, max_value=50))
    return RafValue(center=center, linear=linear, nonlinear_radius=radius)


def evaluate(a: RafValue, eps: dict[int, float], err: float) -> float:
    """Concrete value of a RAF under a symbol assignment."""
    return (
        a.center
        + sum(c * eps.get(i, 0.0) for i, c in a.linear.items())
        + a.nonlinear_radius * err
    )


def test_canonicalization_drops_zero_coefficients():
    a = RafValue(center=1.0, linear={0: 0.0, 1: 2.0, 2: -0.0})
    assert a.linear == {1: 2.0}


def test_negative_radius_rejected():
    with pytest.raises(InputError):
        RafValue(center=0.0, nonlinear_radius=-1.0)


def test_range_examples():
    a = RafValue(1.0, {1: 2.0}, 0.5)
    assert raf_range(a).lo == -1.5 and raf_range(a).hi == 3.5
    assert raf_range(RafValue.constant(0.0)).lo == 0.0
    b = RafValue(0.0, {1: 1.0, 2: 1.0})
    assert raf_range(b).lo == -2.0 and raf_range(b).hi == 2.0


def test_range_of_top_rejected():
    with pytest.raises(InputError):
        raf_range(RafValue.top())


def test_affine_examples():
    a = RafValue(1.0, {1: 1.0}, 0.5)
    assert raf_affine(a, 1.0, 0.0) == a
    half = raf_affine(RafValue(0.0, {1: 1.0}), -0.5, 0.0)
    assert half == RafValue(0.0, {1: -0.5})
    out = raf_affine(a, -2.0, 3.0)
    assert out == RafValue(1.0, {1: -2.0}, 1.0)


def test_add_examples():
    a = RafValue(0.0, {1: 1.0})
    b = RafValue(0.0, {1: -1.0})
    assert raf_add(a, b) == RafValue.constant(0.0)
    out = raf_add(RafValue(1.0, {1: 2.0}), RafValue(2.0, {2: 3.0}))
    assert out == RafValue(3.0, {1: 2.0, 2: 3.0})
    # -0.5*(-0.5 eps1 + eps2) + 0.5*(0.5 eps1 - eps2) = 0.5 eps1 - eps2
    lhs = raf_affine(RafValue(0.0, {1: -0.5, 2: 1.0}), -0.5, 0.0)
    rhs = raf_affine(RafValue(0.0, {1: 0.5, 2: -1.0}), 0.5, 0.0)
    assert raf_add(lhs, rhs) == RafValue(0.0, {1: 0.5, 2: -1.0})


def test_dependency_regression_x_minus_x():
    # an input variable: all deviation is in shared linear symbols
    a = RafValue(0.3, {1: 2.0})
    out = raf_add(a, raf_affine(a, -1.0, 0.0))
    assert out == RafValue.constant(0.0)


def test_mul_constant_multiplier_is_affine():
    b = RafValue(2.0, {1: 1.5, 3: -0.5}, 0.25)
    assert raf_mul(RafValue.constant(3.0), b) == raf_affine(b, 3.0, 0.0)
    assert raf_mul(b, RafValue.constant(3.0)) == raf_affine(b, 3.0, 0.0)


def test_mul_square_of_pure_symbol():
    a = RafValue(0.0, {1: 1.0})
    out = raf_mul(a, a)
    # eps^2 lies in [0,1]; the tightened diagonal rule captures it exactly
    rng = raf_range(out)
    assert rng.lo <= 0.0 <= 1.0 <= rng.hi or (rng.lo == 0.0 and rng.hi == 1.0)
    base = raf_mul_baseline(a, a)
    assert base == RafValue(0.0, {}, 1.0)
    assert out.nonlinear_radius <= base.nonlinear_radius


def test_mul_worked_square():
    a = RafValue(47.0, {1: 8.0, 2: 7.0})
    out = raf_mul(a, a)
    assert out.linear[1] == pytest.approx(752.0, abs=1e-9)
    assert out.linear[2] == pytest.approx(658.0, abs=1e-9)
    # diagonal tightening: center 2209 + (64+49)/2, radius 15^2 - (64+49)/2
    assert out.center == pytest.approx(2265.5, abs=1e-9)
    assert out.nonlinear_radius == pytest.approx(168.5, abs=1e-9)
    base = raf_mul_baseline(a, a)
    assert base.center == pytest.approx(2209.0)
    assert base.nonlinear_radius == pytest.approx(225.0)
    assert out.nonlinear_radius <= base.nonlinear_radius
    # sampled soundness: true square stays inside the range
    rng = raf_range(out)
    for e1 in np.linspace(-1, 1, 21):
        for e2 in np.linspace(-1, 1, 21):
            v = (47 + 8 * e1 + 7 * e2) ** 2
            assert rng.lo - 1e-9 <= v <= rng.hi + 1e-9


def test_mul_soundness_bulk():
    """10^5 random (a, b, assignment) triples stay inside the product range."""
    rng = np.random.default_rng(42)
    for _ in range(2000):
        na, nb = rng.integers(0, 4, size=2)
        a = RafValue(
            float(rng.uniform(-5, 5)),
            {int(i): float(rng.uniform(-3, 3)) for i in range(na)},
            float(rng.uniform(0, 2)),
        )
        b = RafValue(
            float(rng.uniform(-5, 5)),
            {int(i): float(rng.uniform(-3, 3)) for i in rng.choice(4, size=nb, replace=False)},
            float(rng.uniform(0, 2)),
        )
        out = raf_mul(a, b)
        out_rng = raf_range(out)
        base_rng = raf_range(raf_mul_baseline(a, b))
        assert out.nonlinear_radius <= raf_mul_baseline(a, b).nonlinear_radius + 1e-12
        assert base_rng.lo - 1e-9 <= out_rng.lo and out_rng.hi <= base_rng.hi + 1e-9
        eps = rng.uniform(-1, 1, size=(50, 4))
        ea = rng.uniform(-1, 1, size=50)
        eb = rng.uniform(-1, 1, size=50)
        for row in range(50):
            assign = {i: eps[row, i] for i in range(4)}
            va = evaluate(a, assign, ea[row])
            vb = evaluate(b, assign, eb[row])
            assert out_rng.contains(va * vb, tol=1e-9 * (1 + abs(va * vb)))


@given(rafs(), st.floats(-10, 10), st.floats(-10, 10))
def test_affine_complete(a, alpha, beta):
    """Affine images of the range equal the range of the affine image."""
    rng_in = raf_range(a)
    out = raf_affine(a, alpha, beta)
    rng_out = raf_range(out)
    lo = min(alpha * rng_in.lo + beta, alpha * rng_in.hi + beta)
    hi = max(alpha * rng_in.lo + beta, alpha * rng_in.hi + beta)
    assert rng_out.lo == pytest.approx(lo, abs=1e-6)
    assert rng_out.hi == pytest.approx(hi, abs=1e-6)


@settings(max_examples=50)
@given(st.lists(st.tuples(coeff, coeff), min_size=1, max_size=4), coeff)
def test_linear_expression_completeness(terms, const):
    """Abstract evaluation of an affine expression over the unit box has
    exactly the true range (independent oracle: sign-pattern enumeration)."""
    acc = RafValue.constant(const)
    for i, (scale, shift) in enumerate(terms):
        acc = raf_add(acc, raf_affine(RafValue(0.0, {i: 1.0}), scale, shift))
    rng = raf_range(acc)
    total = const + sum(shift for _, shift in terms)
    spread = sum(abs(scale) for scale, _ in terms)
    assert rng.lo == pytest.approx(total - spread, abs=1e-9)
    assert rng.hi == pytest.approx(total + spread, abs=1e-9)


def test_exp_constant_input():
    out = raf_exp(RafValue.constant(2.0), -1.0)
    assert out == RafValue.constant(math.exp(-2.0))


def test_exp_secant_slope_and_containment():
    a = RafValue(0.0, {1: 1.0})
    out = raf_exp(a, -1.0)
    expected_slope = (math.exp(-1) - math.e) / 2.0
    assert out.linear[1] == pytest.approx(expected_slope, abs=1e-12)
    rng = raf_range(out)
    assert rng.lo <= math.exp(-1) and rng.hi >= math.e


def test_exp_soundness_sweep():
    rng_gen = np.random.default_rng(3)
    for _ in range(20):
        a = RafValue(
            float(rng_gen.uniform(-2, 2)),
            {0: float(rng_gen.uniform(-2, 2)), 1: float(rng_gen.uniform(-2, 2))},
            float(rng_gen.uniform(0, 1)),
        )
        scale = float(rng_gen.choice([-2.0, -0.5, 0.7]))
        out = raf_exp(a, scale)
        out_rng = raf_range(out)
        for _ in range(50):
            assign = {0: rng_gen.uniform(-1, 1), 1: rng_gen.uniform(-1, 1)}
            err = rng_gen.uniform(-1, 1)
            u = evaluate(a, assign, err)
            # the result must cover exp at u for the *same* assignment
            v = evaluate(out, assign, 0.0)
            assert abs(math.exp(scale * u) - v) <= out.nonlinear_radius + 1e-9
            assert out_rng.contains(math.exp(scale * u), tol=1e-9)


def test_exp_interval_fallback_drops_relations():
    a = RafValue(0.0, {1: 1.0})
    out = raf_exp(a, -1.0, method="interval")
    assert out.linear == {}
    rng = raf_range(out)
    assert rng.lo == pytest.approx(math.exp(-1))
    assert rng.hi == pytest.approx(math.e)


def test_collapse_preserves_range():
    a = RafValue(1.0, {1: 2.0, 2: -3.0, 7: 0.5}, 0.25)
    out = raf_collapse(a, keep=frozenset({7}))
    assert out.linear == {7: 0.5}
    assert raf_range(out) == raf_range(a)


def test_top_propagates():
    t = RafValue.top()
    assert raf_add(t, RafValue.constant(1.0)).is_top
    assert raf_mul(t, RafValue.constant(1.0)).is_top
    assert raf_affine(t, 2.0, 1.0).is_top

import math

import numpy as np
import pytest

from helpers import (
    parabola_model,
    numeric_schema,
    random_legal_point,
    random_model,
    random_perturbation,
    tier,
    unit_numeric,
)
from svmcert import (
    Domain,
    FeatureSchema,
    IntervalValue,
    KernelSpec,
    NumericFeature,
    PerturbationSpec,
    SearchConfig,
    SimilaritySpec,
    SvmModel,
    build_region,
    classify,
    fairness_lower_bound,
    fairness_upper_bound,
    search,
    verify_robust,
    vertex_candidate,
)
from svmcert.errors import InputError
from svmcert.model import LabeledDataset, classify_many, decision_value
from svmcert.search import Cut

CFG = SearchConfig(max_depth=8, wall_timeout=None)

SQRT2 = math.sqrt(2.0)


def narrow_band_model():
    """The degree-2 model with the narrow box around (-1, 0) as its range."""
    m = parabola_model()
    schema = FeatureSchema((
        NumericFeature("x1", IntervalValue(-1.0, 1.0)),
        NumericFeature("x2", IntervalValue(-1.0 / (2.0 + SQRT2), 0.0)),
    ))
    return SvmModel(m.kernel, m.support_vectors, m.alphas, m.bias, schema)


def test_vertex_candidate_first_worked_example():
    m = parabola_model()
    spec = PerturbationSpec.linf_noise(0.5, (0, 1))
    region = build_region([0.5, -0.5], spec, m.schema, Domain.RAF, False)
    cand = vertex_candidate(m, region, +1)
    assert cand.tolist() == [1.0, 0.0]


def test_vertex_candidate_second_worked_example():
    m = narrow_band_model()
    spec = PerturbationSpec.linf_noise(2.0, (0, 1))
    region = build_region([-1.0, 0.0], spec, m.schema, Domain.RAF, False)
    cand = vertex_candidate(m, region, -1)
    # bottom-left corner: the flat axis resolves to its lower bound
    assert cand[0] == pytest.approx(-1.0)
    assert cand[1] == pytest.approx(-1.0 / (2.0 + SQRT2), abs=1e-12)
    assert classify(m, cand) == 1  # not yet a counterexample


def test_vertex_candidate_tier_rule():
    feats = unit_numeric("n") + tier("c", "c1", "c2", "c3")
    schema = FeatureSchema(tuple(feats))
    w = np.array([0.1, -0.2, 0.9, 0.4])
    center = np.full(4, 0.5)
    sv = np.stack([center + 0.5 * w, center - 0.5 * w])
    m = SvmModel(KernelSpec.linear(), sv, np.array([1.0, -1.0]), 0.9, schema)
    spec = PerturbationSpec.noise_cat(0.1, (0,), ("c",))
    region = build_region([0.5, 1.0, 0.0, 0.0], spec, schema, Domain.RAF, False)
    cand = vertex_candidate(m, region, +1)
    assert cand[1:].tolist() == [0.0, 1.0, 0.0]  # only the best member is set
    down = vertex_candidate(m, region, -1)
    assert down[1:].tolist() == [1.0, 0.0, 0.0]  # most negative contribution


def test_vertex_candidate_flat_gradient_takes_lower_corner():
    # a constant decision surface has an all-zero gradient everywhere
    schema = numeric_schema(2)
    m = SvmModel(
        KernelSpec.linear(), np.zeros((1, 2)), np.array([1.0]), -1.0, schema
    )
    spec = PerturbationSpec.linf_noise(0.2, (0, 1))
    region = build_region([0.5, 0.5], spec, schema, Domain.RAF, False)
    cand = vertex_candidate(m, region, +1)
    assert cand == pytest.approx([0.3, 0.3], abs=1e-12)


def test_search_first_example_depth0():
    m = parabola_model()
    spec = PerturbationSpec.linf_noise(0.5, (0, 1))
    cex = search(m, [0.5, -0.5], spec, CFG)
    assert cex is not None
    assert cex.point == (1.0, 0.0)
    assert cex.depth_found == 0
    assert cex.original_label == -1 and cex.label == 1
    assert decision_value(m, cex.point) == pytest.approx(3.0, abs=1e-9)


def test_search_second_example_depth2_with_cuts():
    m = narrow_band_model()
    spec = PerturbationSpec.linf_noise(2.0, (0, 1))
    trace: list[Cut] = []
    cex = search(m, [-1.0, 0.0], spec, CFG, trace=trace)
    assert cex is not None
    assert cex.depth_found == 2
    assert trace[0].feature == 1
    assert trace[0].value == pytest.approx(-1.0 / (2.0 * (2.0 + SQRT2)), abs=1e-9)
    assert trace[1].feature == 0
    assert trace[1].value == pytest.approx(0.0, abs=1e-12)
    assert classify(m, cex.point) != cex.original_label


def test_search_robust_linear_model_finds_nothing():
    rng = np.random.default_rng(2)
    for _ in range(20):
        m = random_model(rng, "linear", with_category=False)
        x = random_legal_point(rng, m.schema)
        spec = random_perturbation(rng, m.schema)
        if verify_robust(m, x, spec).proved_robust:
            assert search(m, x, spec, CFG) is None


def test_linear_heuristic_completeness():
    """On linear kernels the depth-0 vertex is the true extremum, so any
    unproved sample immediately yields a counterexample."""
    rng = np.random.default_rng(16)
    checked_unknown = 0
    for _ in range(100):
        m = random_model(rng, "linear", with_category=(rng.random() < 0.4))
        x = random_legal_point(rng, m.schema)
        spec = random_perturbation(rng, m.schema)
        outcome = verify_robust(m, x, spec)
        rng_out = outcome.output.range
        if min(abs(rng_out.lo), abs(rng_out.hi)) < 1e-6:
            continue  # boundary-degenerate draw
        if outcome.proved_robust:
            assert search(m, x, spec, CFG) is None
        else:
            checked_unknown += 1
            cex = search(m, x, spec, SearchConfig(max_depth=0, wall_timeout=None))
            assert cex is not None and cex.depth_found == 0
    assert checked_unknown >= 10


def test_search_validates_returned_point():
    m = parabola_model()
    spec = PerturbationSpec.linf_noise(0.5, (0, 1))
    cex = search(m, [0.5, -0.5], spec, CFG)
    assert classify(m, cex.point) == cex.label != cex.original_label
    assert -1e-12 <= cex.point[0] - 0.0 and cex.point[0] <= 1.0 + 1e-12
    assert -1.0 - 1e-12 <= cex.point[1] <= 0.0 + 1e-12


def test_search_determinism():
    m = narrow_band_model()
    spec = PerturbationSpec.linf_noise(2.0, (0, 1))
    t1: list[Cut] = []
    t2: list[Cut] = []
    c1 = search(m, [-1.0, 0.0], spec, CFG, trace=t1)
    c2 = search(m, [-1.0, 0.0], spec, CFG, trace=t2)
    assert c1 == c2 and t1 == t2


def test_search_respects_max_depth():
    m = narrow_band_model()
    spec = PerturbationSpec.linf_noise(2.0, (0, 1))
    assert search(m, [-1.0, 0.0], spec, SearchConfig(max_depth=1, wall_timeout=None)) is None
    assert search(m, [-1.0, 0.0], spec, SearchConfig(max_depth=2, wall_timeout=None)) is not None


def test_search_min_region_fraction_stops_splitting():
    m = narrow_band_model()
    spec = PerturbationSpec.linf_noise(2.0, (0, 1))
    cfg = SearchConfig(max_depth=20, min_region_fraction=1.0, wall_timeout=None)
    assert search(m, [-1.0, 0.0], spec, cfg) is None


def test_deeper_search_never_loses_counterexamples():
    rng = np.random.default_rng(23)
    for _ in range(15):
        m = random_model(rng, "polynomial", with_category=False)
        x = random_legal_point(rng, m.schema)
        spec = random_perturbation(rng, m.schema)
        shallow = search(m, x, spec, SearchConfig(max_depth=2, wall_timeout=None))
        if shallow is not None:
            deep = search(m, x, spec, SearchConfig(max_depth=5, wall_timeout=None))
            assert deep is not None
            assert deep.depth_found <= shallow.depth_found


def test_soundness_consistency_verify_vs_search():
    rng = np.random.default_rng(29)
    for trial in range(25):
        m = random_model(rng, ("linear", "polynomial", "rbf")[trial % 3], with_category=True)
        x = random_legal_point(rng, m.schema)
        spec = random_perturbation(rng, m.schema)
        if verify_robust(m, x, spec).proved_robust:
            assert search(m, x, spec, SearchConfig(max_depth=4, wall_timeout=None)) is None


def test_fairness_bounds_consistent(catmix):
    models, data = catmix
    sim = SimilaritySpec("noise-cat", epsilon=0.05, categories=("color",))
    cfg = SearchConfig(max_depth=3, wall_timeout=None)
    for model in models.values():
        lb = fairness_lower_bound(model, data, sim)
        ub = fairness_upper_bound(model, data, sim, cfg)
        assert lb <= ub + 1e-12


def test_upper_bound_counting():
    m = parabola_model()
    rows = np.array([[0.5, -0.5], [0.5, 0.9]])
    data = LabeledDataset(X=rows, y=classify_many(m, rows))
    sim = SimilaritySpec("noise", epsilon=0.5)
    ub = fairness_upper_bound(m, data, sim, CFG)
    # the first row has the worked counterexample; the second is far from the curve
    assert ub == 0.5
    tight = SimilaritySpec("noise", epsilon=0.01)
    assert fairness_upper_bound(m, data, tight, CFG) == 1.0  # nothing found anywhere


def test_config_validation():
    with pytest.raises(InputError):
        SearchConfig(min_region_fraction=0.0)
    with pytest.raises(InputError):
        SearchConfig(max_depth=-1)

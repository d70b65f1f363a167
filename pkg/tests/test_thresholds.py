import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cgim.thresholds import (
    Concavity,
    ThresholdModel,
    Variant,
    activates,
    cdf,
    delta_from_payoffs,
    is_concave_cdf,
    numeric_concavity,
    parse_model,
    requirement_distribution,
    requirement_of,
    sample_threshold,
    sample_thresholds,
)

CONTINUOUS = [
    ThresholdModel.linear(),
    ThresholdModel.concave(),
    ThresholdModel.convex(),
    ThresholdModel.power_law(1.5),
    ThresholdModel.power_law(2.0),
    ThresholdModel.power_law(3.5),
]
ALL = CONTINUOUS + [ThresholdModel.majority(), ThresholdModel.constant(0.3),
                    ThresholdModel.constant(1.0)]


class FixedU:
    """Stand-in generator yielding a fixed uniform."""

    def __init__(self, u):
        self.u = u
        self.calls = 0

    def random(self, size=None):
        self.calls += 1
        return self.u if size is None else np.full(size, self.u)


def test_cdf_examples():
    assert cdf(ThresholdModel.power_law(2.0), 0.25) == pytest.approx(0.25)
    assert cdf(ThresholdModel.concave(), 0.25) == pytest.approx(0.5)
    assert cdf(ThresholdModel.majority(), 0.49) == 0.0
    assert cdf(ThresholdModel.majority(), 0.5) == 1.0


@pytest.mark.parametrize("x", [-0.01, 1.0001, float("nan")])
def test_cdf_domain(x):
    with pytest.raises(ValueError):
        cdf(ThresholdModel.linear(), x)


@pytest.mark.parametrize("model", ALL, ids=str)
def test_cdf_endpoints_and_monotone(model):
    if model.continuous:
        assert cdf(model, 0.0) == 0.0
    assert cdf(model, 1.0) == 1.0
    x = np.linspace(0, 1, 2001)
    assert np.all(np.diff(cdf(model, x)) >= 0)


def test_powerlaw_two_is_linear():
    x = np.linspace(0, 1, 1001)
    assert np.array_equal(cdf(ThresholdModel.power_law(2.0), x), x)


def test_sample_examples():
    r = FixedU(0.7)
    assert sample_threshold(ThresholdModel.majority(), r) == 0.5
    assert r.calls == 0
    assert sample_threshold(ThresholdModel.linear(), FixedU(0.36)) == 0.36
    assert sample_threshold(ThresholdModel.concave(), FixedU(0.36)) == pytest.approx(0.1296)


@pytest.mark.slow
@pytest.mark.parametrize("model", CONTINUOUS, ids=str)
def test_empirical_cdf_matches(model):
    # Kolmogorov sup-distance of 1e6 draws; 0.005 is ~3.7x the 1% critical value
    x = np.sort(sample_thresholds(model, np.random.default_rng(11), 10**6))
    n = len(x)
    F = cdf(model, x)
    upper = np.arange(1, n + 1) / n - F
    lower = F - np.arange(n) / n
    assert max(upper.max(), lower.max()) < 0.005


def test_sequential_and_vector_sampling_agree():
    m = ThresholdModel.convex()
    a = np.random.default_rng(5)
    b = np.random.default_rng(5)
    seq = [sample_threshold(m, a) for _ in range(50)]
    assert np.allclose(seq, sample_thresholds(m, b, 50), rtol=0, atol=0)


def test_delta_from_payoffs():
    assert delta_from_payoffs(1, 1) == 0.5
    assert delta_from_payoffs(1, 3) == 0.25
    assert delta_from_payoffs(2, 6) == 0.25
    for bad in [(0, 1), (1, 0), (-1, 2)]:
        with pytest.raises(ValueError):
            delta_from_payoffs(*bad)


pos = st.floats(min_value=1e-6, max_value=1e6, allow_nan=False)


@given(a=pos, b=pos, e=st.integers(-20, 20))
def test_payoff_scale_invariance_exact(a, b, e):
    c = 2.0 ** e  # exact scaling in binary floating point
    assert delta_from_payoffs(c * a, c * b) == delta_from_payoffs(a, b)


@given(a=pos, b=pos, c=pos)
def test_payoff_scale_invariance(a, b, c):
    d = delta_from_payoffs(a, b)
    assert 0 < d < 1
    assert delta_from_payoffs(c * a, c * b) == pytest.approx(d, rel=1e-14, abs=1e-300)


def test_concavity_judgments():
    assert is_concave_cdf(ThresholdModel.linear()) is Concavity.CONCAVE_CONTINUOUS_INCREASING
    assert is_concave_cdf(ThresholdModel.concave()) is Concavity.CONCAVE_CONTINUOUS_INCREASING
    assert is_concave_cdf(ThresholdModel.power_law(1.5)) is Concavity.CONCAVE_CONTINUOUS_INCREASING
    assert is_concave_cdf(ThresholdModel.power_law(2.0)) is Concavity.CONCAVE_CONTINUOUS_INCREASING
    assert is_concave_cdf(ThresholdModel.majority()) is Concavity.DISCONTINUOUS
    assert is_concave_cdf(ThresholdModel.power_law(3)) is Concavity.NOT_CONCAVE
    assert is_concave_cdf(ThresholdModel.convex()) is Concavity.NOT_CONCAVE


@pytest.mark.parametrize("model", ALL, ids=str)
def test_numeric_concavity_agrees(model):
    judged = is_concave_cdf(model) is Concavity.CONCAVE_CONTINUOUS_INCREASING
    assert numeric_concavity(model, points=400) == judged


def test_requirement_distribution_examples():
    np.testing.assert_allclose(
        requirement_distribution(ThresholdModel.linear(), 3), [0, 1 / 3, 1 / 3, 1 / 3], atol=1e-15)
    p = requirement_distribution(ThresholdModel.majority(), 4)
    assert p.tolist() == [0, 0, 1, 0, 0]
    q = requirement_distribution(ThresholdModel.concave(), 2)
    np.testing.assert_allclose(q, [0, math.sqrt(0.5), 1 - math.sqrt(0.5)], atol=1e-15)
    assert q.sum() == pytest.approx(1, abs=1e-15)
    with pytest.raises(ValueError):
        requirement_distribution(ThresholdModel.linear(), 0)


@pytest.mark.parametrize("model", ALL, ids=str)
@pytest.mark.parametrize("d", [1, 2, 3, 7, 40])
def test_requirement_distribution_valid_and_matches_sampling(model, d):
    p = requirement_distribution(model, d)
    assert abs(p.sum() - 1) < 1e-12
    assert np.all(p >= 0)
    # independent route: frequencies of ceil(delta * d) over sampled thresholds
    m = requirement_of(sample_thresholds(model, np.random.default_rng(d), 200_000), d)
    freq = np.bincount(m, minlength=d + 1) / len(m)
    assert np.abs(freq - p).max() < 0.006


def test_threshold_rule_equivalence_grid():
    """x >= delta*d  iff  F(x/d) >= F(delta) for strictly increasing F."""
    deltas = np.linspace(0, 1, 1001)[1:-1]
    for model in CONTINUOUS:
        for d in range(1, 13):
            for x in range(d + 1):
                direct = x >= deltas * d
                lhs = cdf(model, np.full_like(deltas, x / d))
                via_cdf = lhs >= cdf(model, deltas)
                # exact ties x == delta*d can flip by rounding inside F; skip them
                tie = np.isclose(x, deltas * d, rtol=0, atol=1e-12)
                assert np.array_equal(direct[~tie], via_cdf[~tie]), (model, d, x)
                assert np.array_equal(x >= requirement_of(deltas, d), direct)


def test_activation_tie_rule():
    assert activates(2, 0.5, 4)
    assert not activates(1, 0.5, 4)
    assert not activates(0, 0.3, 0)


@pytest.mark.parametrize("spec, expected", [
    ("linear", ThresholdModel.linear()),
    ("CONCAVE", ThresholdModel.concave()),
    ("Convex", ThresholdModel.convex()),
    ("majority:0.5", ThresholdModel.majority()),
    ("MAJORITY:0.25", ThresholdModel.constant(0.25)),
    ("powerlaw:3", ThresholdModel.power_law(3)),
])
def test_parse_model(spec, expected):
    m = parse_model(spec)
    assert m == expected
    assert parse_model(m.spec) == m


@pytest.mark.parametrize("spec", ["", "lin", "majority:0", "majority:1.5", "powerlaw:1",
                                  "powerlaw", "powerlaw:x", "linear:3"])
def test_parse_model_rejects(spec):
    with pytest.raises(ValueError):
        parse_model(spec)


def test_constructor_validation():
    with pytest.raises(ValueError):
        ThresholdModel(Variant.CONSTANT, 0.0)
    with pytest.raises(ValueError):
        ThresholdModel(Variant.POWER_LAW, 0.9)

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from confbias.core import (
    BetaOdds,
    ConstantVariance,
    DomainError,
    Exponential,
    LogGamma,
    RelativeExponential,
    SweetSpot,
)
from confbias.models import asymptotic_bias, influence, newton_solve, true_variance_coeff
from confbias.montecarlo import (
    McPlan,
    draw_sample,
    influence_empirical,
    map_estimate,
    mle_estimate,
    normality_check,
    run_mc,
    sequential_map_bias,
    summarize,
    weighted_mean_estimate,
)
from confbias.rng import Stream


def test_weighted_mean_examples():
    x = np.array([0.3, -1.2, 2.0])
    assert weighted_mean_estimate(x, Exponential(0.0)) == pytest.approx(x.mean())
    assert weighted_mean_estimate([-1, 1], Exponential(1.0)) == pytest.approx(-math.tanh(1.0), abs=1e-15)
    p = np.array([0.2, 0.5, 0.9])
    assert weighted_mean_estimate(p, BetaOdds(3, 3, 0)) == pytest.approx(p.mean())


def test_weighted_mean_beta_domain():
    with pytest.raises(DomainError):
        weighted_mean_estimate([0.2, 1.0], BetaOdds(3, 3, 1))


@settings(max_examples=25, deadline=None)
@given(st.floats(-2, 2), st.integers(0, 10_000))
def test_weighted_mean_equals_mle(beta, seed):
    # for the exponential model the MLE is exactly the weighted mean
    x = Stream(seed).normal(200)
    m = Exponential(beta)
    assert mle_estimate(x, m) == pytest.approx(weighted_mean_estimate(x, m), abs=1e-8)


@given(st.floats(0.1, 5), st.floats(0.05, 4))
def test_sweet_spot_symmetric_sample(c, beta):
    from confbias.models import log_likelihood
    m = SweetSpot(beta)
    est = mle_estimate([-c, c], m)
    if beta * c * c < 0.99:
        assert est == pytest.approx(0.0, abs=1e-12)
    elif beta * c * c > 1.01:
        # zero is a local minimum; the maxima are a symmetric pair
        assert abs(est) > 1e-6
        assert log_likelihood(m, est, [-c, c], 1.0) == pytest.approx(
            log_likelihood(m, -est, [-c, c], 1.0), rel=1e-12)
        assert log_likelihood(m, est, [-c, c], 1.0) > log_likelihood(m, 0.0, [-c, c], 1.0)


def test_mle_large_sample_log_gamma():
    x = draw_sample(LogGamma(1.0), 10**6, 1.0, seed=1, index=0)
    assert abs(mle_estimate(x, LogGamma(1.0)) + 0.5) <= 3 * math.sqrt(1.71828 / 10**6)


def test_mle_large_sample_constant_variance():
    m = ConstantVariance(1.0, 2.0)
    x = draw_sample(m, 10**6, 1.0, seed=1, index=0)
    root, _ = newton_solve(m, 1.0)
    assert abs(mle_estimate(x, m) - root) <= 3 * math.sqrt(true_variance_coeff(m) / 10**6)


def test_summarize():
    r = summarize([1.0, 2.0, 3.0, 4.0], n=10, seed=3, keep=True)
    assert r.mean == 2.5 and r.var == pytest.approx(5 / 3)
    assert r.se == pytest.approx(math.sqrt(r.var / 4))
    assert r.skewness == pytest.approx(0.0)
    assert r.values == (1.0, 2.0, 3.0, 4.0)
    assert set(r.to_dict()) == {"mean", "var", "se", "skewness", "R", "n", "seed"}


def test_plan_validation():
    with pytest.raises(ValueError):
        McPlan(1, 10, 0, Exponential(1.0))
    with pytest.raises(ValueError):
        McPlan(5, 0, 0, Exponential(1.0))


def test_run_mc_exponential():
    r = run_mc(McPlan(200, 10_000, 11, Exponential(0.5)))
    assert abs(r.mean + 0.5) <= 3 * r.se
    assert 10_000 * r.var == pytest.approx(1.25 * math.exp(0.25), rel=0.25)


def test_run_mc_unbiased():
    r = run_mc(McPlan(200, 10_000, 12, Exponential(0.0)))
    assert 10_000 * r.var == pytest.approx(1.0, rel=0.25)
    assert abs(r.mean) <= 3 * r.se


def test_run_mc_deterministic_across_workers():
    plan = McPlan(24, 2000, 5, ConstantVariance(1.0, 2.0))
    a = run_mc(plan)
    b = run_mc(McPlan(24, 2000, 5, ConstantVariance(1.0, 2.0), workers=4))
    assert a.to_json() == b.to_json()


def test_influence_empirical_at_mean_and_far_right():
    m = Exponential(1.0)
    at_mean = influence_empirical(m, -1.0, 1.0, 5000, seed=2, replications=40)
    assert abs(at_mean) < 0.05
    near = influence_empirical(m, 0.0, 1.0, 5000, seed=2, replications=40)
    far = influence_empirical(m, 3.0, 1.0, 5000, seed=2, replications=40)
    assert abs(far) < abs(near)


def test_influence_empirical_log_gamma():
    m = LogGamma(1.0)
    est = influence_empirical(m, 4.0, 1.0, 10_000, seed=3, replications=30)
    assert est == pytest.approx(1 - math.exp(-4.5), abs=0.1)
    assert influence(m, 4.0, 1.0) == pytest.approx(0.98889, abs=1e-5)


def test_normality_examples():
    assert normality_check(Stream(1).normal(10_000)).passed
    expo = -np.log(Stream(2).uniform(10_000))
    res = normality_check(expo)
    assert not res.passed and res.statistic > 3 * res.critical


def test_normality_against_statsmodels():
    lilliefors = pytest.importorskip("statsmodels.stats.diagnostic").lilliefors
    x = Stream(9).normal(500)
    ours = normality_check(x)
    theirs, _ = lilliefors(x, dist="norm", pvalmethod="table")
    assert ours.statistic == pytest.approx(theirs, rel=1e-10)


def test_normality_needs_enough_values():
    with pytest.raises(ValueError):
        normality_check(np.zeros(50))


def test_beta_sampler_moments():
    x = Stream(4).beta(200_000, 3, 3)
    assert x.mean() == pytest.approx(0.5, abs=0.003)
    assert x.var() == pytest.approx(9 / (36 * 7), rel=0.02)
    y = Stream(4).beta(200_000, 2.5, 1.5)
    assert y.mean() == pytest.approx(2.5 / 4, abs=0.003)


def test_map_estimate_relative_exponential_moves_with_n():
    biases = sequential_map_bias(RelativeExponential(0.5), 1.0, [100, 1000, 10_000], seed=5)
    assert biases[0] > biases[1] > biases[2]
    # unbiased case stays near the truth
    x = draw_sample(RelativeExponential(0.0), 10_000, 1.0, 5, 0)
    assert abs(map_estimate(x, RelativeExponential(0.0), 1.0, 0.0, 1.0)) < 0.05


def test_constant_variance_kink_bias_at_lambda():
    # at x = lam the influence has a kink; the finite-n empirical value there is
    # E|lam - lam_hat| / 2 * (1/c_plus - 1/c_minus), which shrinks like 1/sqrt(n)
    # at the same rate as its Monte Carlo error
    from confbias.special import norm_cdf
    m = ConstantVariance(1.0, 2.0)
    n, R = 10_000, 100
    lam = asymptotic_bias(m, 1.0)
    c_plus = 2.0 * norm_cdf(lam) + norm_cdf(-lam)
    c_minus = norm_cdf(lam) + 0.5 * norm_cdf(-lam)
    mean_abs = math.sqrt(2 / math.pi) * math.sqrt(true_variance_coeff(m) / n)
    predicted = mean_abs / 2 * (1 / c_plus - 1 / c_minus)
    from confbias.montecarlo import influence_replicates
    r = summarize(influence_replicates(m, [lam], 1.0, n, seed=1, replications=R)[:, 0])
    assert abs(r.mean - predicted) <= 3 * r.se
    assert abs(predicted) > r.se  # the bias is visible at this R

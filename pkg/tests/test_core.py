import json
import math

import pytest
from hypothesis import given, strategies as st

from confbias.core import (
    BeliefState,
    BetaOdds,
    ConstantVariance,
    ConstraintViolation,
    Exponential,
    LogGamma,
    RelativeExponential,
    ScenarioConfig,
    SweetSpot,
    model_from_dict,
    model_to_dict,
    scenario_from_json,
    scenario_to_json,
    validate,
    violations,
)

finite = st.floats(-50, 50, allow_nan=False)
positive = st.floats(1e-3, 50)


def test_beta_odds_valid():
    validate(BetaOdds(a=3, b=3, g=1))


def test_beta_odds_g_too_large_names_field():
    with pytest.raises(ConstraintViolation) as exc:
        validate(BetaOdds(a=1, b=1, g=1.5))
    assert exc.value.field == "g"
    assert "g < a" in exc.value.reason


def test_exponential_zero_ok():
    validate(Exponential(beta=0))


@pytest.mark.parametrize("model, field", [
    (SweetSpot(beta=0), "beta"),
    (SweetSpot(beta=-1), "beta"),
    (ConstantVariance(beta=1, gamma=0), "gamma"),
    (ConstantVariance(beta=-1, gamma=1), "beta"),
    (LogGamma(beta=0), "beta"),
    (BetaOdds(a=0, b=1, g=-0.5), "a"),
    (BetaOdds(a=2, b=1, g=-1), "g"),
    (Exponential(beta=math.nan), "beta"),
    (RelativeExponential(beta=math.inf), "beta"),
])
def test_invalid_models(model, field):
    with pytest.raises(ConstraintViolation) as exc:
        validate(model)
    assert exc.value.field == field


def test_violations_lists_all():
    assert [v.field for v in violations(BetaOdds(a=-1, b=-1, g=0))][:2] == ["a", "b"]
    assert violations(Exponential(0.3)) == []


def test_unknown_variant():
    with pytest.raises(ConstraintViolation) as exc:
        model_from_dict({"variant": "gaussian", "beta": 1})
    assert exc.value.field == "variant"


def test_extra_parameter_rejected():
    with pytest.raises(ConstraintViolation) as exc:
        model_from_dict({"variant": "exponential", "beta": 1, "gamma": 2})
    assert exc.value.field == "gamma"


models = st.one_of(
    st.builds(Exponential, finite),
    st.builds(RelativeExponential, finite),
    st.builds(SweetSpot, positive),
    st.builds(ConstantVariance, positive, positive),
    st.builds(LogGamma, finite.filter(lambda b: b != 0)),
    st.builds(lambda a, b, t: BetaOdds(a, b, -b + t * (a + b)), positive, positive,
              st.floats(0.01, 0.99)),
)


@given(models)
def test_model_dict_round_trip(model):
    d = model_to_dict(model)
    assert json.loads(json.dumps(d)) == d
    assert model_from_dict(d) == model


@given(models, finite, positive, finite, positive, st.integers(1, 10**6),
       st.integers(0, 2**64 - 1))
def test_scenario_json_round_trip(model, mu, sigma, pm, pv, n, seed):
    config = ScenarioConfig(mu, sigma, pm, pv, n, seed)
    assert scenario_from_json(scenario_to_json(config, model)) == (config, model)


@pytest.mark.parametrize("kw, field", [
    (dict(sigma=0.0), "sigma"), (dict(prior_var=-1.0), "prior_var"),
    (dict(n_obs=0), "n_obs"), (dict(seed=-1), "seed"), (dict(seed=2**64), "seed"),
])
def test_scenario_constraints(kw, field):
    base = dict(mu=0.0, sigma=1.0, prior_mean=0.0, prior_var=1.0, n_obs=10, seed=1)
    with pytest.raises(ConstraintViolation) as exc:
        ScenarioConfig(**{**base, **kw})
    assert exc.value.field == field


def test_belief_state_derived():
    b = BeliefState(mean=1.0, var=4.0)
    assert b.precision == 0.25
    assert b.sd == 2.0

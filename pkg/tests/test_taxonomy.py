import json

import pytest

from confbias.core import (
    BetaOdds,
    ConstantVariance,
    Exponential,
    LogGamma,
    RelativeExponential,
    SweetSpot,
)
from confbias.taxonomy import classify, influence_monotone_scan, reports_json, severity_order


def test_classify_examples():
    assert classify(RelativeExponential(0.5)).has_asymptotic_limit is False
    assert classify(ConstantVariance(1, 2)).influence_monotone is True
    assert classify(Exponential(1.0)).influence_monotone is False


@pytest.mark.parametrize("m", [Exponential(1.0), Exponential(0.0), LogGamma(1.0), LogGamma(-1.0),
                               ConstantVariance(1, 2), ConstantVariance(0.5, 4)], ids=repr)
def test_analytic_monotone_agrees_with_scan(m):
    assert classify(m).influence_monotone is influence_monotone_scan(m, 1.0)


def test_confirming_side():
    assert classify(Exponential(1.0)).prizes_confirming_side
    assert classify(LogGamma(1.0)).prizes_confirming_side
    assert not classify(ConstantVariance(1, 2)).prizes_confirming_side
    assert not classify(Exponential(0.0)).prizes_confirming_side
    assert classify(BetaOdds(3, 3, 1)).prizes_confirming_side


def test_subjective_distribution_flags():
    assert classify(SweetSpot(1.0)).has_subjective_distribution
    assert classify(LogGamma(1.0)).has_subjective_distribution
    assert not classify(Exponential(1.0)).has_subjective_distribution


def test_severity_examples():
    assert severity_order([Exponential(1), ConstantVariance(1, 2), LogGamma(1)]) == \
        [ConstantVariance(1, 2), LogGamma(1), Exponential(1)]
    assert severity_order([]) == []
    assert severity_order([RelativeExponential(0.5), Exponential(1)]) == \
        [Exponential(1), RelativeExponential(0.5)]


def test_severity_stable_for_ties():
    ms = [Exponential(2.0), Exponential(0.5)]
    assert severity_order(ms) == ms


def test_reports_json():
    doc = json.loads(reports_json([LogGamma(1.0), RelativeExponential(0.5)]))
    assert doc[0]["variant"] == "log-gamma" and doc[0]["model"]["beta"] == 1.0
    assert doc[1]["influence_monotone"] is None

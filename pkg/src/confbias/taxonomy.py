"""Four-way classification of bias models and their severity ordering."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np

from .core import (
    BetaOdds,
    BiasModel,
    ConstantVariance,
    Divergent,
    Exponential,
    LogGamma,
    RelativeExponential,
    SweetSpot,
    model_to_dict,
    validate,
)
from .models import asymptotic_bias, influence, kernel

# constant variance < log-gamma < exponential < no asymptotic limit.
# Sweet-spot (unbiased) shares the lowest rank; beta-odds discounts the same
# way as the exponential model and shares its rank.
SEVERITY_RANK = {
    ConstantVariance: 0,
    SweetSpot: 0,
    LogGamma: 1,
    Exponential: 2,
    BetaOdds: 2,
    RelativeExponential: 3,
}

SCAN_POINTS = 4001
SCAN_HALF_WIDTH = 10.0


@dataclass(frozen=True)
class ClassificationReport:
    variant: str
    has_asymptotic_limit: bool
    prizes_confirming_side: bool
    has_subjective_distribution: bool
    influence_monotone: bool | None  # None where no influence function exists
    severity_rank: int

    def to_dict(self) -> dict:
        return asdict(self)


def influence_monotone_scan(model: BiasModel, sigma: float) -> bool:
    """True when the influence function never decreases over ``lam +- 10 sigma``.

    Central differences on a 4001-point grid.
    """
    lam = asymptotic_bias(model, sigma)
    x = np.linspace(lam - SCAN_HALF_WIDTH * sigma, lam + SCAN_HALF_WIDTH * sigma, SCAN_POINTS)
    h = 1e-4 * sigma
    slope = (influence(model, x + h, sigma) - influence(model, x - h, sigma)) / (2 * h)
    return bool(np.all(slope > -1e-9))


def _influence_monotone_analytic(model: BiasModel) -> bool | None:
    if isinstance(model, (ConstantVariance, LogGamma)):
        return True
    if isinstance(model, Exponential):
        # influence turns down at x = lam + sigma / beta
        return model.beta == 0
    if isinstance(model, RelativeExponential) and model.beta == 0:
        return True
    return None


def _prizes_confirming_side(model: BiasModel, sigma: float, lam: float) -> bool:
    k = kernel(model)
    if isinstance(model, BetaOdds):
        p = np.linspace(1e-3, lam, 2001)[:-1]
        return bool(np.any(k.obs_variance(p, lam) < 1.0))
    x = np.linspace(lam - SCAN_HALF_WIDTH * sigma, lam, SCAN_POINTS)[:-1]
    return bool(np.any(k.obs_variance(x, lam, sigma) < sigma**2 * (1 - 1e-12)))


def classify(model: BiasModel, sigma: float = 1.0) -> ClassificationReport:
    validate(model)
    try:
        lam = asymptotic_bias(model, sigma)
        has_limit = True
    except Divergent:
        has_limit = False
        lam = 0.0  # relative discounting is judged against the current belief
    if isinstance(model, BetaOdds):
        lam = kernel(model).mean()
    return ClassificationReport(
        variant=model.variant,
        has_asymptotic_limit=has_limit,
        prizes_confirming_side=_prizes_confirming_side(model, sigma, lam),
        has_subjective_distribution=kernel(model).has_subjective_distribution,
        influence_monotone=_influence_monotone_analytic(model) if has_limit else None,
        severity_rank=SEVERITY_RANK[type(model)],
    )


def severity_order(models: list[BiasModel]) -> list[BiasModel]:
    """Stable sort by severity rank, ties broken by variant name."""
    return sorted(models, key=lambda m: (SEVERITY_RANK[type(m)], m.variant))


def reports_json(models: list[BiasModel], sigma: float = 1.0) -> str:
    return json.dumps([{"model": model_to_dict(m), **classify(m, sigma).to_dict()}
                       for m in models], indent=2)

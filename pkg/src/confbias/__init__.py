"""Directional discounting of evidence: asymptotic bias, variance and dynamics."""

from .core import (
    AsymptoticSummary,
    BeliefState,
    BetaOdds,
    ConfbiasError,
    ConstantVariance,
    ConstraintViolation,
    Divergent,
    Diverging,
    DomainError,
    Exponential,
    LogGamma,
    NoConvergence,
    NoInteriorMaximum,
    RelativeExponential,
    ScenarioConfig,
    SweetSpot,
    TrajectoryRecord,
    Unsupported,
    model_from_dict,
    model_to_dict,
    scenario_from_json,
    scenario_to_json,
    validate,
)
from .models import (
    asymptotic_bias,
    asymptotic_mean,
    asymptotic_summary,
    expected_score,
    influence,
    log_likelihood,
    newton_solve,
    subjective_variance_coeff,
    true_variance_coeff,
)
from .special import I1, I2, In_quadrature, norm_cdf, norm_ppf
from .taxonomy import classify, severity_order

__version__ = "0.1.0"

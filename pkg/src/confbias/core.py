"""Domain types shared across the package.

Bias models are small frozen dataclasses, one per discounting mechanism.
They carry parameters only; the mathematics lives in :mod:`confbias.models`.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, fields
from typing import Any, Union


class ConfbiasError(Exception):
    """Base class for errors raised by this package."""


class ConstraintViolation(ConfbiasError, ValueError):
    def __init__(self, field: str, reason: str):
        self.field = field
        self.reason = reason
        super().__init__(f"{field}: {reason}")


class DomainError(ConfbiasError, ValueError):
    pass


class Divergent(ConfbiasError, ArithmeticError):
    """The model has no finite asymptotic bias."""


class Diverging(Divergent):
    """Root search found no stable maximum of the expected log-likelihood."""


class NoConvergence(ConfbiasError, ArithmeticError):
    pass


class ConvergenceFailure(ConfbiasError, ArithmeticError):
    pass


class NoInteriorMaximum(ConfbiasError, ArithmeticError):
    pass


class Unsupported(ConfbiasError, NotImplementedError):
    pass


# --------------------------------------------------------------------------
# Bias models
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Exponential:
    """Observation variance inflated to ``sigma**2 * exp(beta * x / sigma)``."""

    beta: float = 0.0
    variant = "exponential"


@dataclass(frozen=True)
class BetaOdds:
    """Proportions weighted by the odds ``((1 - p) / p) ** g``.

    ``a`` and ``b`` are the shape parameters of the true beta distribution.
    """

    a: float
    b: float
    g: float
    variant = "beta-odds"


@dataclass(frozen=True)
class RelativeExponential:
    """Like :class:`Exponential` but relative to the current belief."""

    beta: float = 0.0
    variant = "relative-exponential"


@dataclass(frozen=True)
class SweetSpot:
    """Subjective t distribution with ``1 / beta`` degrees of freedom."""

    beta: float
    variant = "sweet-spot"


@dataclass(frozen=True)
class ConstantVariance:
    """Variance scaled by ``beta`` below the belief and ``gamma`` above it."""

    beta: float
    gamma: float
    variant = "constant-variance"


@dataclass(frozen=True)
class LogGamma:
    """Subjective log-gamma distribution for the observations."""

    beta: float
    variant = "log-gamma"


BiasModel = Union[Exponential, BetaOdds, RelativeExponential, SweetSpot, ConstantVariance, LogGamma]

MODEL_TYPES: dict[str, type] = {
    cls.variant: cls
    for cls in (Exponential, BetaOdds, RelativeExponential, SweetSpot, ConstantVariance, LogGamma)
}


def _violations(model: BiasModel) -> list[ConstraintViolation]:
    out = []
    for f in fields(model):
        v = getattr(model, f.name)
        if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(v):
            out.append(ConstraintViolation(f.name, "finite real required"))
    if out:
        return out
    if isinstance(model, BetaOdds):
        if model.a <= 0:
            out.append(ConstraintViolation("a", "a > 0 required"))
        if model.b <= 0:
            out.append(ConstraintViolation("b", "b > 0 required"))
        if not model.g < model.a:
            out.append(ConstraintViolation("g", "g < a required"))
        if not model.g > -model.b:
            out.append(ConstraintViolation("g", "g > -b required"))
    elif isinstance(model, SweetSpot):
        if model.beta <= 0:
            out.append(ConstraintViolation("beta", "beta > 0 required"))
    elif isinstance(model, ConstantVariance):
        if model.beta <= 0:
            out.append(ConstraintViolation("beta", "beta > 0 required"))
        if model.gamma <= 0:
            out.append(ConstraintViolation("gamma", "gamma > 0 required"))
    elif isinstance(model, LogGamma):
        if model.beta == 0:
            out.append(ConstraintViolation("beta", "beta != 0 required"))
    return out


def validate(model: BiasModel) -> None:
    """Raise :class:`ConstraintViolation` for the first broken invariant."""
    if type(model) not in MODEL_TYPES.values():
        raise ConstraintViolation("variant", f"unknown model type {type(model).__name__}")
    problems = _violations(model)
    if problems:
        raise problems[0]


def violations(model: BiasModel) -> list[ConstraintViolation]:
    """All invariant breaches of ``model`` (empty when valid)."""
    return _violations(model)


def model_to_dict(model: BiasModel) -> dict[str, Any]:
    return {"variant": model.variant, **asdict(model)}


def model_from_dict(d: dict[str, Any]) -> BiasModel:
    d = dict(d)
    try:
        cls = MODEL_TYPES[d.pop("variant")]
    except KeyError as exc:
        raise ConstraintViolation("variant", f"unknown or missing variant {exc}") from None
    names = {f.name for f in fields(cls)}
    extra = set(d) - names
    if extra:
        raise ConstraintViolation(sorted(extra)[0], f"not a parameter of {cls.variant}")
    try:
        model = cls(**{k: float(v) for k, v in d.items()})
    except TypeError as exc:
        raise ConstraintViolation("model", str(exc)) from None
    validate(model)
    return model


# --------------------------------------------------------------------------
# Scenario and belief state
# --------------------------------------------------------------------------

U64_MAX = 2**64 - 1


@dataclass(frozen=True)
class ScenarioConfig:
    mu: float
    sigma: float
    prior_mean: float
    prior_var: float
    n_obs: int
    seed: int

    def __post_init__(self):
        if not self.sigma > 0:
            raise ConstraintViolation("sigma", "sigma > 0 required")
        if not self.prior_var > 0:
            raise ConstraintViolation("prior_var", "prior_var > 0 required")
        if not (isinstance(self.n_obs, int) and self.n_obs >= 1):
            raise ConstraintViolation("n_obs", "positive integer required")
        if not (isinstance(self.seed, int) and 0 <= self.seed <= U64_MAX):
            raise ConstraintViolation("seed", "64-bit unsigned integer required")


_SCENARIO_FIELDS = ("mu", "sigma", "prior_mean", "prior_var", "n_obs", "seed")


def scenario_to_json(config: ScenarioConfig, model: BiasModel) -> str:
    doc = {"model": model_to_dict(model)}
    doc.update({k: getattr(config, k) for k in _SCENARIO_FIELDS})
    return json.dumps(doc)


def scenario_from_json(text: str) -> tuple[ScenarioConfig, BiasModel]:
    doc = json.loads(text)
    if "model" not in doc:
        raise ConstraintViolation("model", "missing")
    missing = [k for k in _SCENARIO_FIELDS if k not in doc]
    if missing:
        raise ConstraintViolation(missing[0], "missing")
    for key in ("n_obs", "seed"):
        if not isinstance(doc[key], int) or isinstance(doc[key], bool):
            raise ConstraintViolation(key, "integer required")
    config = ScenarioConfig(
        mu=float(doc["mu"]),
        sigma=float(doc["sigma"]),
        prior_mean=float(doc["prior_mean"]),
        prior_var=float(doc["prior_var"]),
        n_obs=doc["n_obs"],
        seed=doc["seed"],
    )
    return config, model_from_dict(doc["model"])


@dataclass(frozen=True)
class BeliefState:
    mean: float
    var: float

    @property
    def precision(self) -> float:
        return 1.0 / self.var

    @property
    def sd(self) -> float:
        return math.sqrt(self.var)


@dataclass(frozen=True)
class AsymptoticSummary:
    """Large-sample behaviour of a model at a given observation sd.

    Coefficients are dimensionless: ``subj_var_coeff = v * n / sigma**2`` and
    ``true_var_coeff = var(lambda_hat) * n / sigma**2``. Divergent models carry
    NaN in all three numeric fields.
    """

    lam: float
    subj_var_coeff: float
    true_var_coeff: float
    diverges: bool


@dataclass(frozen=True)
class TrajectoryRecord:
    step: int
    observation: float
    perceived_var: float
    post_mean: float
    post_sd: float

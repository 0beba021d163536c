"""Observation-by-observation belief updating.

Beliefs stay normal; each observation is absorbed with a conjugate update
whose observation variance is the model's perceived variance. Only the
models defined through a per-observation variance (exponential, relative
exponential, constant variance) can drive this engine.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .core import (
    BeliefState,
    BiasModel,
    ConstantVariance,
    ConstraintViolation,
    Exponential,
    RelativeExponential,
    ScenarioConfig,
    TrajectoryRecord,
    Unsupported,
    validate,
)
from .models import true_variance_coeff
from .rng import Stream
from .special import norm_cdf


@dataclass(frozen=True)
class PrimacyParams:
    xi: float
    sigma: float

    def __post_init__(self):
        if not self.xi >= 0:
            raise ConstraintViolation("xi", "xi >= 0 required")
        if not self.sigma > 0:
            raise ConstraintViolation("sigma", "sigma > 0 required")


@dataclass(frozen=True)
class PolarizationQuery:
    threshold: float
    lambda_hat: float
    sigma_lambda: float

    def __post_init__(self):
        if not self.sigma_lambda > 0:
            raise ConstraintViolation("sigma_lambda", "sigma_lambda > 0 required")


def perceived_variance(model: BiasModel, x: float, belief_mean: float, sigma: float) -> float:
    validate(model)
    if isinstance(model, Exponential):
        return sigma**2 * math.exp(model.beta * x / sigma)
    if isinstance(model, RelativeExponential):
        return sigma**2 * math.exp(model.beta * (x - belief_mean) / sigma)
    if isinstance(model, ConstantVariance):
        return sigma**2 * (model.gamma if x > belief_mean else model.beta)
    raise Unsupported(f"the {model.variant} model has no per-observation variance")


def update(belief: BeliefState, x: float, perceived_var: float) -> BeliefState:
    """Conjugate normal update with one observation of variance ``perceived_var``."""
    if not perceived_var > 0:
        raise ValueError("perceived_var must be positive")
    if math.isinf(perceived_var):
        return belief
    if math.isinf(belief.var):
        return BeliefState(mean=x, var=perceived_var)
    prec = 1.0 / belief.var + 1.0 / perceived_var
    mean = (belief.mean / belief.var + x / perceived_var) / prec
    return BeliefState(mean=mean, var=1.0 / prec)


def primacy_inflation(var: float, params: PrimacyParams) -> float:
    """Factor ``(sigma^2 / v)^xi`` multiplying the observation variance."""
    return (params.sigma**2 / var) ** params.xi


def primacy_update(belief: BeliefState, x: float, params: PrimacyParams) -> BeliefState:
    """Update with perceived variance ``sigma^2 (sigma^2 / v)^xi``; early data count more."""
    return update(belief, x, params.sigma**2 * primacy_inflation(belief.var, params))


def observations(config: ScenarioConfig) -> np.ndarray:
    return Stream(config.seed, 0).normal(config.n_obs, config.mu, config.sigma)


def run_trajectory(config: ScenarioConfig, model: BiasModel,
                   xi: float | None = None) -> list[TrajectoryRecord]:
    """Belief path over ``config.n_obs`` draws from ``N(mu, sigma^2)`` on stream 0.

    With ``xi`` set, the primacy inflation multiplies the perceived variance.
    """
    validate(model)
    sigma = config.sigma
    primacy = PrimacyParams(xi, sigma) if xi is not None else None
    belief = BeliefState(config.prior_mean, config.prior_var)
    out = []
    for t, x in enumerate(observations(config).tolist(), start=1):
        pv = perceived_variance(model, x, belief.mean, sigma)
        if primacy is not None:
            pv *= primacy_inflation(belief.var, primacy)
        belief = update(belief, x, pv)
        out.append(TrajectoryRecord(t, x, pv, belief.mean, belief.sd))
    return out


TRAJECTORY_HEADER = ("step", "observation", "perceived_var", "post_mean", "post_sd")


def fmt(x) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return format(float(x), ".17g")


def trajectory_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRAJECTORY_HEADER)
    for r in records:
        w.writerow([fmt(r.step), fmt(r.observation), fmt(r.perceived_var),
                    fmt(r.post_mean), fmt(r.post_sd)])
    return buf.getvalue()


def primacy_variance_path(xi: float, sigma: float, n: int, prior_var: float | None = None) -> np.ndarray:
    """Posterior variances ``v_1 .. v_n`` under primacy updating.

    The variance path does not depend on the observed values. The default
    prior variance is ``sigma^2``.
    """
    params = PrimacyParams(xi, sigma)
    v = sigma**2 if prior_var is None else prior_var
    s2 = sigma**2
    out = np.empty(n)
    for t in range(n):
        v = 1.0 / (1.0 / v + (v / s2) ** params.xi / s2)
        out[t] = v
    return out


def primacy_power_law(xi: float, sigma: float, n) -> np.ndarray:
    """Large-n approximation ``(sigma^(2 xi + 2) / ((xi + 1) n))^(1 / (xi + 1))``."""
    n = np.asarray(n, dtype=float)
    return (sigma ** (2 * xi + 2) / ((xi + 1) * n)) ** (1 / (xi + 1))


def loglog_slope(ns, vs) -> float:
    """Least-squares slope of ``log v`` against ``log n``."""
    return float(np.polyfit(np.log(ns), np.log(vs), 1)[0])


def polarization_probability(q: PolarizationQuery) -> float:
    """``Phi((lambda_hat - L) / sigma_lambda)``; increases with ``lambda_hat``."""
    return float(norm_cdf((q.lambda_hat - q.threshold) / q.sigma_lambda))


def default_sigma_lambda(model: BiasModel, sigma: float, n: int) -> float:
    """Sampling sd of the posterior mean after ``n`` observations."""
    return math.sqrt(true_variance_coeff(model, sigma) * sigma**2 / n)


def polarization_paths(models, threshold: float, mu: float, sigma: float, schedule,
                       seed: int, prior_mean: float = 0.0, prior_var: float = 1.0):
    """Polarization probabilities for agents sharing one observation stream.

    Returns ``(schedule, means, probs)`` where ``means[j][i]`` and
    ``probs[j][i]`` belong to agent ``j`` after ``schedule[i]`` observations.
    """
    schedule = sorted({int(n) for n in schedule})
    for m in models:
        validate(m)
    x = Stream(seed, 0).normal(schedule[-1], mu, sigma).tolist()
    checkpoints = set(schedule)
    means = [[] for _ in models]
    probs = [[] for _ in models]
    for j, model in enumerate(models):
        belief = BeliefState(prior_mean, prior_var)
        for t, xt in enumerate(x, start=1):
            belief = update(belief, xt, perceived_variance(model, xt, belief.mean, sigma))
            if t in checkpoints:
                s_lam = default_sigma_lambda(model, sigma, t)
                means[j].append(belief.mean)
                probs[j].append(polarization_probability(
                    PolarizationQuery(threshold, belief.mean, s_lam)))
    return schedule, means, probs

"""Monte Carlo checks of the large-sample formulas.

Each replication draws a fresh sample from the true distribution (``N(0,
sigma^2)``, or ``Beta(a, b)`` for the beta-odds model) on its own random
stream, computes the model's estimate of the location and stores it. The
aggregates are reduced in replication order with compensated summation, so
the result does not depend on how many worker threads ran the replications.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .core import BiasModel, BetaOdds, DomainError, NoInteriorMaximum, validate
from .models import _BetaOddsKernel, _ExponentialKernel, kernel
from .rng import Stream
from .special import norm_cdf

# Lilliefors (1967) asymptotic critical values, D_crit = c / sqrt(N)
LILLIEFORS_COEFF = {0.10: 0.805, 0.05: 0.886, 0.01: 1.031}

_HIST_BINS = 4096


@dataclass(frozen=True)
class McPlan:
    replications: int
    n: int
    seed: int
    model: BiasModel
    sigma: float = 1.0
    estimator: str = "auto"
    keep_values: bool = False
    workers: int = 1

    def __post_init__(self):
        if self.replications < 2:
            raise ValueError("replications must be at least 2")
        if self.n < 1:
            raise ValueError("n must be positive")
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")
        if self.estimator not in ("auto", "weighted", "mle"):
            raise ValueError(f"unknown estimator {self.estimator!r}")
        validate(self.model)


@dataclass(frozen=True)
class McResult:
    mean: float
    var: float
    se: float
    skewness: float
    var_se: float
    R: int
    n: int
    seed: int
    values: tuple | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {"mean": self.mean, "var": self.var, "se": self.se, "skewness": self.skewness,
                "R": self.R, "n": self.n, "seed": self.seed}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def summarize(values, n: int = 0, seed: int = 0, keep: bool = False) -> McResult:
    """Mean, variance (ddof=1), standard errors and skewness of replicates.

    ``var_se`` is the standard error of the sample variance, estimated from
    the fourth central moment of the replicates.
    """
    v = np.asarray(values, dtype=float)
    R = v.size
    mean = math.fsum(v) / R
    d = v - mean
    m2 = math.fsum(d * d) / R
    m3 = math.fsum(d**3) / R
    m4 = math.fsum(d**4) / R
    var = m2 * R / (R - 1)
    skew = m3 / m2**1.5 if m2 > 0 else 0.0
    var_se = math.sqrt(max(m4 - (R - 3) / (R - 1) * var * var, 0.0) / R)
    return McResult(mean=mean, var=var, se=math.sqrt(var / R), skewness=skew, var_se=var_se,
                    R=R, n=n, seed=seed, values=tuple(v.tolist()) if keep else None)


# --------------------------------------------------------------------------
# Estimators
# --------------------------------------------------------------------------


def weighted_mean_estimate(sample, model: BiasModel, sigma: float = 1.0) -> float:
    """Precision-weighted mean with the model's directional weights."""
    validate(model)
    x = np.asarray(sample, dtype=float)
    if x.size == 0:
        raise ValueError("sample must be nonempty")
    k = kernel(model)
    if isinstance(k, _BetaOddsKernel):
        if np.any((x <= 0) | (x >= 1)):
            raise DomainError("beta-odds samples must lie strictly inside (0, 1)")
        return k.weighted_mean(x)
    if isinstance(k, _ExponentialKernel):
        return k.weighted_mean(x, sigma)
    raise DomainError(f"the {model.variant} model has no weighted-mean form")


def _total_score(k, x, sigma):
    return lambda lam: float(np.sum(k.score(x, lam, sigma)))


def _total_loglik(k, x, sigma):
    return lambda lam: float(np.sum(k.loglik(x, lam, sigma)))


def _binned_scores(k, x, sigma, grid):
    """Approximate summed score at each grid point from a histogram of ``x``."""
    counts, edges = np.histogram(x, bins=_HIST_BINS)
    keep = counts > 0
    c = counts[keep].astype(float)
    centers = 0.5 * (edges[:-1] + edges[1:])[keep]
    return np.array([np.dot(c, k.score(centers, g, sigma)) for g in grid])


def _refine(f, curv, grid, i, xtol):
    """Local maxima (downward score roots) near cell ``i`` of ``grid``."""
    lo, hi = i, i + 1
    flo, fhi = f(grid[lo]), f(grid[hi])
    while flo <= 0 and lo > 0:
        lo -= 1
        flo = f(grid[lo])
    while fhi >= 0 and hi < len(grid) - 1:
        hi += 1
        fhi = f(grid[hi])
    if not (flo > 0 > fhi):
        return []
    return _downward_roots(f, curv, grid[lo], grid[hi], xtol)


def _downward_roots(f, curv, a, b, xtol, depth=0):
    """Maxima in ``[a, b]`` given ``f(a) > 0 > f(b)``.

    The bracket holds an odd number of roots and Brent's method may land on a
    local minimum; in that case each side of it holds another bracket.
    """
    r = optimize.brentq(f, a, b, xtol=xtol)
    if curv(r) < 0 or depth >= 40:
        return [r]
    out = []
    for sign, end in ((-1, a), (1, b)):
        d = max(xtol, 1e-12 * (b - a))
        p = r + sign * d
        while (f(p) >= 0 if sign < 0 else f(p) <= 0) and (p - end) * sign < 0:
            d *= 2
            p = r + sign * d
        if (p - end) * sign < 0:
            sub = (a, p) if sign < 0 else (p, b)
            out += _downward_roots(f, curv, *sub, xtol, depth + 1)
    return out or [r]


def mle_estimate(sample, model: BiasModel, sigma: float = 1.0, grid_points: int = 129) -> float:
    """Maximiser of the model log-likelihood over ``[min - 10 sigma, max + 10 sigma]``.

    Concave log-likelihoods are solved by Brent's method on the summed score.
    Otherwise the score is scanned (on a binned copy of the sample) for
    downward zero crossings, each is refined exactly, and the best local
    maximum is returned unless an end of the interval does better.
    """
    validate(model)
    x = np.asarray(sample, dtype=float)
    if x.size == 0:
        raise ValueError("sample must be nonempty")
    k = kernel(model)
    if isinstance(k, _BetaOddsKernel):
        lo, hi = float(x.min()), float(x.max())
        xtol = 1e-15
    else:
        lo, hi = float(x.min()) - 10 * sigma, float(x.max()) + 10 * sigma
        xtol = 1e-15 * sigma
    f = _total_score(k, x, sigma)
    curv = lambda lam: float(np.sum(k.score_deriv(x, lam, sigma)))
    if lo == hi:
        return lo
    if k.concave:
        flo, fhi = f(lo), f(hi)
        if flo == 0:
            return lo
        if fhi == 0:
            return hi
        if not (flo > 0 > fhi):
            raise NoInteriorMaximum("summed score does not change sign over the bracket")
        return optimize.brentq(f, lo, hi, xtol=xtol)

    grid = np.linspace(lo, hi, grid_points)
    approx = _binned_scores(k, x, sigma, grid)
    cells = np.nonzero((approx[:-1] > 0) & (approx[1:] <= 0))[0]
    roots = {r for i in cells for r in _refine(f, curv, grid, i, xtol)}
    if not roots:
        raise NoInteriorMaximum("no interior stationary maximum of the log-likelihood")
    ll = _total_loglik(k, x, sigma)
    best = max(roots, key=ll)
    if max(ll(lo), ll(hi)) > ll(best):
        raise NoInteriorMaximum("log-likelihood is largest at the edge of the search interval")
    return float(best)


def map_estimate(sample, model: BiasModel, sigma: float, prior_mean: float,
                 prior_var: float, spacing: float = 0.02) -> float:
    """Posterior mode under a normal prior on the location.

    Every model log-likelihood here is bounded above by 0, so any location
    farther than ``r = sqrt(2 prior_var (0 - logpost(prior_mean)))`` from the
    prior mean has lower posterior density than the prior mean itself. The
    mode is located on a grid over that window (``spacing`` in units of
    sigma) and polished with a bounded scalar search.
    """
    validate(model)
    x = np.asarray(sample, dtype=float)
    k = kernel(model)
    ll = _total_loglik(k, x, sigma)

    def logpost(lam):
        return ll(lam) - (lam - prior_mean) ** 2 / (2 * prior_var)

    r = math.sqrt(2 * prior_var * max(-logpost(prior_mean), 0.0)) + spacing * sigma
    lo, hi = prior_mean - r, prior_mean + r
    num = int(min(max(2 * r / (spacing * sigma), 101), 200_001))
    grid = np.linspace(lo, hi, num)
    if hasattr(k, "total_loglik"):
        vals = k.total_loglik(x, grid, sigma) - (grid - prior_mean) ** 2 / (2 * prior_var)
    else:
        coarse = np.linspace(lo, hi, min(num, 4001))
        grid = coarse
        vals = np.array([logpost(g) for g in coarse])
    i = int(np.argmax(vals))
    a, b = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    res = optimize.minimize_scalar(lambda l: -logpost(l), bounds=(a, b), method="bounded",
                                   options={"xatol": 1e-10 * sigma})
    return float(res.x) if -res.fun >= vals[i] else float(grid[i])


def _default_estimator(model):
    return "weighted" if isinstance(kernel(model), (_ExponentialKernel, _BetaOddsKernel)) else "mle"


def estimate(sample, model: BiasModel, sigma: float = 1.0, estimator: str = "auto") -> float:
    if estimator == "auto":
        estimator = _default_estimator(model)
    if estimator == "weighted":
        return weighted_mean_estimate(sample, model, sigma)
    return mle_estimate(sample, model, sigma)


def draw_sample(model: BiasModel, n: int, sigma: float, seed: int, index: int) -> np.ndarray:
    """``n`` true observations on stream ``index`` of ``seed``."""
    s = Stream(seed, index)
    if isinstance(model, BetaOdds):
        return s.beta(n, model.a, model.b)
    return s.normal(n, 0.0, sigma)


# --------------------------------------------------------------------------
# Harness
# --------------------------------------------------------------------------


def _map_ordered(fn, items, workers):
    if workers <= 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def run_mc(plan: McPlan) -> McResult:
    """Replicate the estimator ``plan.replications`` times; replication ``i`` uses stream ``i``."""

    def one(i):
        sample = draw_sample(plan.model, plan.n, plan.sigma, plan.seed, i)
        return estimate(sample, plan.model, plan.sigma, plan.estimator)

    values = _map_ordered(one, range(plan.replications), plan.workers)
    return summarize(values, plan.n, plan.seed, keep=plan.keep_values)


def influence_replicates(model: BiasModel, xs, sigma: float, n: int, seed: int,
                         replications: int = 100, estimator: str = "auto",
                         workers: int = 1) -> np.ndarray:
    """``n * (lam_hat(sample + [x]) - lam_hat(sample))`` for each replication and probe.

    Returns an array of shape ``(replications, len(xs))``.
    """
    validate(model)
    xs = np.atleast_1d(np.asarray(xs, dtype=float))

    def one(i):
        sample = draw_sample(model, n, sigma, seed, i)
        base = estimate(sample, model, sigma, estimator)
        return [n * (estimate(np.append(sample, x), model, sigma, estimator) - base) for x in xs]

    return np.array(_map_ordered(one, range(replications), workers))


def influence_empirical(model: BiasModel, x: float, sigma: float, n: int, seed: int,
                        replications: int = 100, workers: int = 1) -> float:
    """Empirical influence of one extra observation at ``x``, averaged over replications."""
    vals = influence_replicates(model, [x], sigma, n, seed, replications, workers=workers)[:, 0]
    return math.fsum(vals) / len(vals)


@dataclass(frozen=True)
class NormalityResult:
    statistic: float
    critical: float
    alpha: float
    passed: bool


def normality_check(values, alpha: float = 0.01) -> NormalityResult:
    """Lilliefors test: KS distance to the normal with fitted mean and sd.

    Critical value ``c_alpha / sqrt(N)`` with ``c = 1.031`` at the 1% level
    (0.886 at 5%, 0.805 at 10%).
    """
    v = np.sort(np.asarray(values, dtype=float))
    N = v.size
    if N < 100:
        raise ValueError("normality_check needs at least 100 values")
    if alpha not in LILLIEFORS_COEFF:
        raise ValueError(f"alpha must be one of {sorted(LILLIEFORS_COEFF)}")
    z = (v - v.mean()) / v.std(ddof=1)
    cdf = norm_cdf(z)
    i = np.arange(1, N + 1)
    d = max(np.max(i / N - cdf), np.max(cdf - (i - 1) / N))
    crit = LILLIEFORS_COEFF[alpha] / math.sqrt(N)
    return NormalityResult(statistic=float(d), critical=crit, alpha=alpha, passed=bool(d <= crit))


def sequential_map_bias(model: BiasModel, sigma: float, ns, seed: int,
                        prior_mean: float = 0.0, prior_var: float = 1.0) -> list[float]:
    """Posterior modes on growing prefixes of a single observation stream."""
    ns = [int(n) for n in ns]
    x = draw_sample(model, max(ns), sigma, seed, 0)
    return [map_estimate(x[:n], model, sigma, prior_mean, prior_var) for n in ns]

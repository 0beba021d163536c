"""Large-sample behaviour of the bias models.

Every model is handled through a per-observation log-likelihood ``loglik``,
its derivative ``score`` with respect to the location ``lam`` and the second
derivative ``score_deriv``. For the two weighting models (exponential and
beta-odds) the log-likelihood is the one whose maximiser is the weighted
mean, ``-w(x) (x - lam)^2 / 2 sigma^2``.

With the true observations ``X ~ N(0, sigma^2)`` (a beta distribution for the
beta-odds model) the asymptotic bias is the root of the expected score, the
subjective variance is ``-1 / E[score_deriv]`` and the true variance is the
sandwich ``E[score^2] / E[score_deriv]^2``. Closed forms are used where they
exist; :func:`generic_asymptotics` recomputes everything by quadrature.

All variance coefficients are per observation and scaled by ``sigma^2``, so
``v = coeff * sigma^2 / n``.
"""

from __future__ import annotations

import functools
import math

import numpy as np
from scipy import integrate, optimize, stats

from .core import (
    AsymptoticSummary,
    BetaOdds,
    BiasModel,
    ConstantVariance,
    Divergent,
    Diverging,
    Exponential,
    LogGamma,
    NoConvergence,
    RelativeExponential,
    SweetSpot,
    Unsupported,
    validate,
)
from .special import I1, I2, beta_ratio, norm_cdf, norm_pdf, sweet_spot_moments

NEWTON_MAX_ITER = 50
NEWTON_WINDOW = 20.0  # safeguard window, in units of sigma


def _one_minus_exp_neg(z):
    """``1 - exp(-z)`` without cancellation."""
    return -np.expm1(-z)


def _exp_neg_remainder(z):
    """``exp(-z) - 1 + z``, accurate for small ``|z|``."""
    z = np.asarray(z, dtype=float)
    small = np.abs(z) < 1e-3
    big = np.expm1(-np.where(small, 1.0, z)) + np.where(small, 1.0, z)
    series = z * z * (0.5 - z * (1.0 / 6 - z * (1.0 / 24 - z / 120)))
    return np.where(small, series, big)


class _Kernel:
    concave = True  # log-likelihood concave in lam, score monotone decreasing
    has_subjective_distribution = False
    normal_observations = True

    def scale(self, sigma):
        return sigma

    # per-observation pieces, broadcasting over x and lam
    def loglik(self, x, lam, sigma):
        raise NotImplementedError

    def score(self, x, lam, sigma):
        raise NotImplementedError

    def score_deriv(self, x, lam, sigma):
        raise NotImplementedError

    # expectations under the true distribution
    def expected_score(self, lam, sigma):
        m = expected_moments_quadrature(self, lam, sigma)
        return m["score"], m["curvature"]

    def expected_loglik(self, lam, sigma):
        return expected_moments_quadrature(self, lam, sigma)["loglik"]

    def loglik_limit_at_infinity(self, sigma):
        """Supremum of the expected log-likelihood at infinite ``lam``, or None."""
        return None

    def bias(self, sigma):
        return newton_solve_kernel(self, sigma)[0]

    def subjective(self, sigma):
        lam = self.bias(sigma)
        return -1.0 / (self.expected_score(lam, sigma)[1] * sigma**2)

    def true_var(self, sigma):
        raise NotImplementedError

    def influence(self, x, sigma):
        raise Unsupported(f"no influence function for {type(self).__name__}")

    def obs_variance(self, x, lam, sigma):
        """Variance the model effectively assigns to an observation at ``x``."""
        u = np.asarray(x, dtype=float) - lam
        s = self.score(x, lam, sigma)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(u == 0, sigma**2, u / s)


class _ExponentialKernel(_Kernel):
    def __init__(self, beta):
        self.beta = beta

    def weight(self, x, sigma):
        return np.exp(-self.beta * np.asarray(x, dtype=float) / sigma)

    def loglik(self, x, lam, sigma):
        return -self.weight(x, sigma) * (np.asarray(x) - lam) ** 2 / (2 * sigma**2)

    def score(self, x, lam, sigma):
        return self.weight(x, sigma) * (np.asarray(x) - lam) / sigma**2

    def score_deriv(self, x, lam, sigma):
        return -self.weight(x, sigma) / sigma**2 + 0.0 * np.asarray(lam)

    def expected_score(self, lam, sigma):
        ew = math.exp(self.beta**2 / 2)
        return ew * (-self.beta * sigma - lam) / sigma**2, -ew / sigma**2

    def expected_loglik(self, lam, sigma):
        # E[w (X - lam)^2] = e^{b^2/2} ((lam + b sigma)^2 + sigma^2)
        b = self.beta
        return -math.exp(b * b / 2) * ((lam + b * sigma) ** 2 + sigma**2) / (2 * sigma**2)

    def bias(self, sigma):
        return -self.beta * sigma

    def subjective(self, sigma):
        return math.exp(-self.beta**2 / 2)

    def true_var(self, sigma):
        b2 = self.beta**2
        return (1 + b2) * math.exp(b2)

    def influence(self, x, sigma):
        lam = self.bias(sigma)
        x = np.asarray(x, dtype=float)
        return np.exp(-self.beta * (x / sigma + self.beta / 2)) * (x - lam)

    def obs_variance(self, x, lam, sigma):
        return sigma**2 * np.exp(self.beta * np.asarray(x, dtype=float) / sigma)

    def weighted_mean(self, sample, sigma):
        x = np.asarray(sample, dtype=float)
        logw = -self.beta * x / sigma
        w = np.exp(logw - logw.max())
        return float(np.dot(w, x) / w.sum())


class _BetaOddsKernel(_Kernel):
    """Weighted mean of proportions; ``sigma`` plays no role."""

    normal_observations = False

    def __init__(self, a, b, g):
        self.a, self.b, self.g = a, b, g

    def scale(self, sigma):
        return 1.0

    def weight(self, p):
        p = np.asarray(p, dtype=float)
        return np.exp(self.g * (np.log1p(-p) - np.log(p)))

    def loglik(self, x, lam, sigma=1.0):
        return -self.weight(x) * (np.asarray(x) - lam) ** 2 / 2

    def score(self, x, lam, sigma=1.0):
        return self.weight(x) * (np.asarray(x) - lam)

    def score_deriv(self, x, lam, sigma=1.0):
        return -self.weight(x) + 0.0 * np.asarray(lam)

    def _w_moment(self, k):
        # E[w p^k] under Beta(a, b)
        a, b, g = self.a, self.b, self.g
        return beta_ratio(a - g + k, b + g, a, b)

    def expected_score(self, lam, sigma=1.0):
        return self._w_moment(1) - lam * self._w_moment(0), -self._w_moment(0)

    def mean(self):
        return (self.a - self.g) / (self.a + self.b)

    def bias(self, sigma=1.0):
        return -self.g / (self.a + self.b)

    def subjective(self, sigma=1.0):
        a, b, g = self.a, self.b, self.g
        return a * b / ((a + b) ** 2 * (a + b + 1)) * beta_ratio(a - g, b + g, a, b)

    def true_var(self, sigma=1.0):
        a, b, g = self.a, self.b, self.g
        if a - 2 * g <= 0 or b + 2 * g <= 0:
            return math.inf
        lam = self.mean()
        e2 = (beta_ratio(a - 2 * g + 2, b + 2 * g, a, b)
              - 2 * lam * beta_ratio(a - 2 * g + 1, b + 2 * g, a, b)
              + lam**2 * beta_ratio(a - 2 * g, b + 2 * g, a, b))
        return e2 / self._w_moment(0) ** 2

    def obs_variance(self, x, lam, sigma=1.0):
        return 1.0 / self.weight(x)

    def weighted_mean(self, sample, sigma=1.0):
        p = np.asarray(sample, dtype=float)
        logw = self.g * (np.log1p(-p) - np.log(p))
        w = np.exp(logw - logw.max())
        return float(np.dot(w, p) / w.sum())


class _RelativeExponentialKernel(_Kernel):
    concave = False

    def __init__(self, beta):
        self.beta = beta

    def loglik(self, x, lam, sigma):
        u = (np.asarray(x, dtype=float) - lam) / sigma
        return -u * u * np.exp(-self.beta * u) / 2

    def score(self, x, lam, sigma):
        u = (np.asarray(x, dtype=float) - lam) / sigma
        return u * np.exp(-self.beta * u) * (1 - self.beta * u / 2) / sigma

    def score_deriv(self, x, lam, sigma):
        b = self.beta
        u = (np.asarray(x, dtype=float) - lam) / sigma
        return -np.exp(-b * u) * (1 - 2 * b * u + b * b * u * u / 2) / sigma**2

    # u = (X - lam)/sigma ~ N(m, 1) with m = -lam/sigma; d = m - beta
    def _tilt(self, lam, sigma):
        b = self.beta
        m = -lam / sigma
        return math.exp(-b * m + b * b / 2), m - b

    def expected_score(self, lam, sigma):
        b = self.beta
        e, d = self._tilt(lam, sigma)
        score = e * (d - b * (d * d + 1) / 2) / sigma
        curv = -e * (1 - 2 * b * d + b * b * (d * d + 1) / 2) / sigma**2
        return score, curv

    def expected_loglik(self, lam, sigma):
        e, d = self._tilt(lam, sigma)
        return -e * (d * d + 1) / 2

    def loglik_limit_at_infinity(self, sigma):
        return 0.0 if self.beta != 0 else None

    def _divergent(self):
        return Divergent(f"relative-exponential model with beta={self.beta} has no finite bias")

    def bias(self, sigma):
        if self.beta != 0:
            raise self._divergent()
        return 0.0

    def subjective(self, sigma):
        if self.beta != 0:
            raise self._divergent()
        return 1.0

    def true_var(self, sigma):
        if self.beta != 0:
            raise self._divergent()
        return 1.0

    def influence(self, x, sigma):
        if self.beta != 0:
            raise self._divergent()
        return np.asarray(x, dtype=float) - 0.0

    def obs_variance(self, x, lam, sigma):
        return sigma**2 * np.exp(self.beta * (np.asarray(x, dtype=float) - lam) / sigma)

    def total_loglik(self, sample, lams, sigma):
        """Summed log-likelihood over a grid of ``lams`` in O(len(sample) + len(lams)).

        ``sum u^2 exp(-b u)`` only needs three exponentially weighted moments
        of the sample, shifted to the sample extreme to keep them bounded.
        """
        x = np.asarray(sample, dtype=float)
        b = self.beta
        shift = x.min() if b >= 0 else x.max()
        d = (x - shift) / sigma
        w = np.exp(-b * d)
        m0, m1, m2 = w.sum(), np.dot(w, d), np.dot(w, d * d)
        c = (shift - np.asarray(lams, dtype=float)) / sigma
        with np.errstate(over="ignore", invalid="ignore"):
            val = -np.exp(-b * c) * (m2 + 2 * c * m1 + c * c * m0) / 2
        return np.where(np.isnan(val), -np.inf, val)


class _SweetSpotKernel(_Kernel):
    concave = False
    has_subjective_distribution = True

    def __init__(self, beta):
        self.beta = beta

    def loglik(self, x, lam, sigma):
        b = self.beta
        u = (np.asarray(x, dtype=float) - lam) / sigma
        return -(1 + b) * np.log1p(b * u * u) / (2 * b)

    def score(self, x, lam, sigma):
        b = self.beta
        u = (np.asarray(x, dtype=float) - lam) / sigma
        return (1 + b) * u / (sigma * (1 + b * u * u))

    def score_deriv(self, x, lam, sigma):
        b = self.beta
        u = (np.asarray(x, dtype=float) - lam) / sigma
        q = 1 + b * u * u
        return (1 + b) * (b * u * u - 1) / (sigma**2 * q * q)

    def expected_score(self, lam, sigma):
        if lam == 0:
            b = self.beta
            return 0.0, -(1 + b) * sweet_spot_moments(b)[1] / sigma**2
        return super().expected_score(lam, sigma)

    def bias(self, sigma):
        return 0.0

    def subjective(self, sigma):
        b = self.beta
        return 1.0 / ((1 + b) * sweet_spot_moments(b)[1])

    def true_var(self, sigma):
        b = self.beta
        diff, curv = sweet_spot_moments(b)
        return diff / (b * curv**2)


class _ConstantVarianceKernel(_Kernel):
    has_subjective_distribution = True

    def __init__(self, beta, gamma):
        self.beta, self.gamma = beta, gamma

    def _scales(self, u):
        return np.where(u <= 0, self.beta, self.gamma)

    def loglik(self, x, lam, sigma):
        u = (np.asarray(x, dtype=float) - lam) / sigma
        return -u * u / (2 * self._scales(u))

    def score(self, x, lam, sigma):
        u = (np.asarray(x, dtype=float) - lam) / sigma
        return u / (sigma * self._scales(u))

    def score_deriv(self, x, lam, sigma):
        u = (np.asarray(x, dtype=float) - lam) / sigma
        return -1.0 / (sigma**2 * self._scales(u))

    def _precision(self, l):
        return norm_cdf(l) / self.beta + norm_cdf(-l) / self.gamma

    def expected_score(self, lam, sigma):
        l = lam / sigma
        score = (1 / self.gamma - 1 / self.beta) * norm_pdf(l) - l * self._precision(l)
        return float(score) / sigma, -float(self._precision(l)) / sigma**2

    def expected_loglik(self, lam, sigma):
        # E[(X-lam)^2; X<=lam] = (1+l^2) Phi(l) + l phi(l), upper part by symmetry
        l = lam / sigma
        lower = (1 + l * l) * norm_cdf(l) + l * norm_pdf(l)
        upper = (1 + l * l) * norm_cdf(-l) - l * norm_pdf(l)
        return float(-(lower / self.beta + upper / self.gamma) / 2)

    def subjective(self, sigma):
        l = self.bias(sigma) / sigma
        return 1.0 / float(self._precision(l))

    def true_var(self, sigma):
        b, g = self.beta, self.gamma
        l = self.bias(sigma) / sigma
        num = norm_cdf(l) / b**2 + norm_cdf(-l) / g**2 - l * l / (b * g)
        return float(num / self._precision(l) ** 2)

    def influence(self, x, sigma):
        lam = self.bias(sigma)
        l = lam / sigma
        x = np.asarray(x, dtype=float)
        upper = (x - lam) / ((self.gamma / self.beta) * norm_cdf(l) + norm_cdf(-l))
        lower = (x - lam) / (norm_cdf(l) + (self.beta / self.gamma) * norm_cdf(-l))
        return np.where(x > lam, upper, lower)

    def obs_variance(self, x, lam, sigma):
        return sigma**2 * self._scales(np.asarray(x, dtype=float) - lam)


class _LogGammaKernel(_Kernel):
    has_subjective_distribution = True

    def __init__(self, beta):
        self.beta = beta

    def loglik(self, x, lam, sigma):
        b = self.beta
        u = (np.asarray(x, dtype=float) - lam) / sigma
        if b == 0:
            return -u * u / 2
        return -_exp_neg_remainder(b * u) / b**2

    def score(self, x, lam, sigma):
        b = self.beta
        u = (np.asarray(x, dtype=float) - lam) / sigma
        if b == 0:
            return u / sigma
        return _one_minus_exp_neg(b * u) / (b * sigma)

    def score_deriv(self, x, lam, sigma):
        u = (np.asarray(x, dtype=float) - lam) / sigma
        return -np.exp(-self.beta * u) / sigma**2

    def expected_score(self, lam, sigma):
        b = self.beta
        z = b * lam / sigma + b * b / 2  # log E[exp(-b u)]
        if b == 0:
            return -lam / sigma**2, -1.0 / sigma**2
        return -math.expm1(z) / (b * sigma), -math.exp(z) / sigma**2

    def expected_loglik(self, lam, sigma):
        b = self.beta
        l = lam / sigma
        if b == 0:
            return -(1 + l * l) / 2
        # E[1 - e^{-bu} - bu] / b^2 with E[u] = -l
        return (1 - math.exp(b * l + b * b / 2) + b * l) / b**2

    def bias(self, sigma):
        return -self.beta * sigma / 2

    def subjective(self, sigma):
        return 1.0

    def true_var(self, sigma):
        b2 = self.beta**2
        return 1.0 if b2 == 0 else math.expm1(b2) / b2

    def influence(self, x, sigma):
        b = self.beta
        lam = self.bias(sigma)
        x = np.asarray(x, dtype=float)
        if b == 0:
            return x - lam
        return (sigma / b) * _one_minus_exp_neg(b * (x - lam) / sigma)


@functools.lru_cache(maxsize=256)
def kernel(model: BiasModel) -> _Kernel:
    if isinstance(model, Exponential):
        return _ExponentialKernel(model.beta)
    if isinstance(model, BetaOdds):
        return _BetaOddsKernel(model.a, model.b, model.g)
    if isinstance(model, RelativeExponential):
        return _RelativeExponentialKernel(model.beta)
    if isinstance(model, SweetSpot):
        return _SweetSpotKernel(model.beta)
    if isinstance(model, ConstantVariance):
        return _ConstantVarianceKernel(model.beta, model.gamma)
    if isinstance(model, LogGamma):
        return _LogGammaKernel(model.beta)
    raise TypeError(f"not a bias model: {model!r}")


def _kernel(model):
    validate(model)
    return kernel(model)


# --------------------------------------------------------------------------
# Expectations by quadrature (independent of the closed forms)
# --------------------------------------------------------------------------


def expected_moments_quadrature(model_or_kernel, lam: float, sigma: float) -> dict:
    """``E[loglik]``, ``E[score]``, ``E[score^2]`` and ``E[score_deriv]`` by quadrature.

    Expectations are over ``N(0, sigma^2)`` or, for the beta-odds model, over
    the model's beta distribution.
    """
    k = model_or_kernel if isinstance(model_or_kernel, _Kernel) else _kernel(model_or_kernel)
    funcs = {
        "loglik": lambda x: k.loglik(x, lam, sigma),
        "score": lambda x: k.score(x, lam, sigma),
        "score_sq": lambda x: k.score(x, lam, sigma) ** 2,
        "curvature": lambda x: k.score_deriv(x, lam, sigma),
    }
    out = {}
    if not k.normal_observations:
        dens = stats.beta(k.a, k.b).pdf
        for name, f in funcs.items():
            out[name] = integrate.quad(lambda p: float(f(p)) * dens(p), 0, 1, limit=200,
                                       epsabs=1e-13, epsrel=1e-12)[0]
        return out
    pts = [lam / sigma] if abs(lam / sigma) < 12 else None
    for name, f in funcs.items():
        g = lambda z: float(f(sigma * z)) * math.exp(-0.5 * z * z) / math.sqrt(2 * math.pi)
        out[name] = integrate.quad(g, -12, 12, points=pts, limit=400,
                                   epsabs=1e-13, epsrel=1e-12)[0]
    return out


def generic_asymptotics(model: BiasModel, sigma: float) -> AsymptoticSummary:
    """Bias and both variance coefficients from quadrature alone.

    The bias is located by Brent's method on the quadrature score; used as an
    oracle for the closed forms.
    """
    k = _kernel(model)
    sc = k.scale(sigma)
    score = lambda lam: expected_moments_quadrature(k, lam, sigma)["score"]
    if k.normal_observations:
        lo, hi = -10 * sc, 10 * sc
    else:
        lo, hi = 1e-9, 1 - 1e-9
    lam = optimize.brentq(score, lo, hi, xtol=1e-14)
    m = expected_moments_quadrature(k, lam, sigma)
    norm = sigma**2 if k.normal_observations else 1.0
    return AsymptoticSummary(
        lam=lam,
        subj_var_coeff=-1.0 / (m["curvature"] * norm),
        true_var_coeff=m["score_sq"] / (m["curvature"] ** 2 * norm),
        diverges=False,
    )


# --------------------------------------------------------------------------
# Root finding
# --------------------------------------------------------------------------


def _bisect(f, lo, hi, tol):
    flo = f(lo)
    steps = 0
    while hi - lo > tol and steps < 200:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0:
            return mid, steps + 1
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
        steps += 1
    return 0.5 * (lo + hi), steps


def score_scan(model: BiasModel, sigma: float, lo: float, hi: float, num: int = 4001):
    """Stationary points of the expected log-likelihood on ``[lo, hi]``.

    Returns a list of ``(lam, kind)`` with ``kind`` either ``"max"`` (score
    crosses from + to -) or ``"min"``. Each crossing is refined by bisection.
    """
    k = _kernel(model)
    grid = np.linspace(lo, hi, num)
    vals = np.array([k.expected_score(g, sigma)[0] for g in grid])
    found = []
    for i in range(num - 1):
        a, b = vals[i], vals[i + 1]
        if a == 0:
            found.append((float(grid[i]), "max" if (i and vals[i - 1] > 0) else "min"))
        elif a * b < 0:
            root, _ = _bisect(lambda l: k.expected_score(l, sigma)[0], grid[i], grid[i + 1],
                              1e-13 * k.scale(sigma))
            found.append((root, "max" if a > 0 else "min"))
    if vals[-1] == 0:
        found.append((float(grid[-1]), "max" if vals[-2] > 0 else "min"))
    return found


def newton_solve_kernel(k: _Kernel, sigma: float, start: float = 0.0,
                        max_iter: int = NEWTON_MAX_ITER, tol: float = 1e-12):
    sc = k.scale(sigma)
    lam = start
    it = 0
    while True:
        s, c = k.expected_score(lam, sigma)
        if abs(s) * sc <= tol:
            break
        if it >= max_iter:
            raise NoConvergence(f"Newton iteration did not converge in {max_iter} steps")
        step = s / c if c < 0 else math.inf
        new = lam - step
        it += 1
        if not (abs(new) <= NEWTON_WINDOW * sc):
            lam, extra = _safeguard(k, sigma)
            it += extra
            break
        if new == lam:
            break
        lam = new
    limit = k.loglik_limit_at_infinity(sigma)
    if limit is not None and k.expected_loglik(lam, sigma) <= limit:
        raise Diverging(
            f"stationary point at {lam:.6g} is not a global maximum; the expected "
            "log-likelihood keeps increasing towards infinite bias"
        )
    return lam, it


def _safeguard(k, sigma):
    sc = k.scale(sigma)
    grid = np.linspace(-NEWTON_WINDOW * sc, NEWTON_WINDOW * sc, 4001)
    vals = np.array([k.expected_score(g, sigma)[0] for g in grid])
    down = np.nonzero((vals[:-1] > 0) & (vals[1:] <= 0))[0]
    if down.size == 0:
        raise Diverging(f"expected score has no downward crossing in [-{NEWTON_WINDOW}, "
                        f"{NEWTON_WINDOW}] sigma")
    # nearest maximum to the starting point
    i = down[np.argmin(np.abs(grid[down]))]
    return _bisect(lambda l: k.expected_score(l, sigma)[0], grid[i], grid[i + 1], 1e-14 * sc)


def newton_solve(model: BiasModel, sigma: float, start: float = 0.0,
                 max_iter: int = NEWTON_MAX_ITER, tol: float = 1e-12) -> tuple[float, int]:
    """Root of the expected score by Newton-Raphson from ``start``.

    Convergence is declared when ``|score| * sigma <= tol``. Iterates leaving
    ``[-20 sigma, 20 sigma]`` (or meeting non-negative curvature) switch to
    bisection on a bracket found by scanning that window. Raises
    :class:`Diverging` when there is no bracket, or when the stationary point
    is beaten by the expected log-likelihood at infinite bias.
    """
    return newton_solve_kernel(_kernel(model), sigma, start, max_iter, tol)


# --------------------------------------------------------------------------
# Public closed forms
# --------------------------------------------------------------------------


def asymptotic_bias(model: BiasModel, sigma: float) -> float:
    """Limit of the posterior mean when the true mean is 0.

    For the beta-odds model this is the shift ``-g / (a + b)`` relative to
    the beta mean; ``sigma`` is ignored there.
    """
    return float(_kernel(model).bias(sigma))


def asymptotic_mean(model: BiasModel, sigma: float = 1.0) -> float:
    """Where the estimator settles: the bias, or ``(a - g)/(a + b)`` for beta-odds."""
    k = _kernel(model)
    return k.mean() if isinstance(k, _BetaOddsKernel) else float(k.bias(sigma))


def subjective_variance_coeff(model: BiasModel, sigma: float = 1.0) -> float:
    """``v * n / sigma^2`` (``v * n`` for the beta-odds model)."""
    return float(_kernel(model).subjective(sigma))


def true_variance_coeff(model: BiasModel, sigma: float = 1.0) -> float:
    """``var(lam_hat) * n / sigma^2`` (``n * var`` for the beta-odds model)."""
    return float(_kernel(model).true_var(sigma))


def influence(model: BiasModel, x, sigma: float):
    """Asymptotic influence ``n * delta lam_hat`` of one more observation at ``x``."""
    k = _kernel(model)
    if isinstance(k, (_BetaOddsKernel, _SweetSpotKernel)):
        raise Unsupported(f"no influence function for the {model.variant} model")
    out = k.influence(x, sigma)
    return float(out) if np.ndim(out) == 0 else out


def expected_score(model: BiasModel, lam: float, sigma: float) -> tuple[float, float]:
    """``(E[score], E[score_deriv])`` per observation at ``lam``."""
    s, c = _kernel(model).expected_score(lam, sigma)
    return float(s), float(c)


def log_likelihood(model: BiasModel, lam: float, sample, sigma: float) -> float:
    x = np.asarray(sample, dtype=float)
    if x.size == 0:
        raise ValueError("sample must be nonempty")
    return float(np.sum(_kernel(model).loglik(x, lam, sigma)))


def obs_variance(model: BiasModel, x, lam: float, sigma: float):
    return _kernel(model).obs_variance(x, lam, sigma)


def asymptotic_summary(model: BiasModel, sigma: float) -> AsymptoticSummary:
    k = _kernel(model)
    try:
        lam = float(k.bias(sigma))
    except Divergent:
        nan = math.nan
        return AsymptoticSummary(lam=nan, subj_var_coeff=nan, true_var_coeff=nan, diverges=True)
    return AsymptoticSummary(
        lam=lam,
        subj_var_coeff=float(k.subjective(sigma)),
        true_var_coeff=float(k.true_var(sigma)),
        diverges=False,
    )

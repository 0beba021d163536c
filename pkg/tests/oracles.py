"""Independent reference computations used by the tests.

Everything here is written from the model definitions with scipy quadrature
and bracketing, without touching the package's own kernels.
"""

import math

import numpy as np
from scipy import integrate, optimize
from scipy.stats import norm

SQ2PI = math.sqrt(2 * math.pi)


def gauss_expect(f, sigma=1.0):
    """E f(X) for X ~ N(0, sigma^2)."""
    g = lambda x: f(x) * math.exp(-0.5 * (x / sigma) ** 2) / (sigma * SQ2PI)
    total = 0.0
    for lo, hi in ((-40 * sigma, -5 * sigma), (-5 * sigma, 0.0), (0.0, 5 * sigma), (5 * sigma, 40 * sigma)):
        total += integrate.quad(g, lo, hi, epsabs=1e-14, epsrel=1e-13, limit=400)[0]
    return total


def cv_expected_score(lam, beta, gamma, sigma=1.0):
    u = lam / sigma
    return ((1 / gamma - 1 / beta) * math.exp(-u * u / 2) / (SQ2PI * sigma)
            - lam / sigma**2 * (norm.cdf(-u) / gamma + norm.cdf(u) / beta))


def cv_root(beta, gamma, sigma=1.0):
    return optimize.bisect(cv_expected_score, -20 * sigma, 20 * sigma, args=(beta, gamma, sigma),
                           xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)


# per-observation scores d/dlam loglik, written out per model
def score_fn(variant, lam, sigma, **p):
    b = p.get("beta")
    if variant == "exponential":
        return lambda x: (x - lam) * math.exp(-b * x / sigma) / sigma**2
    if variant == "log-gamma":
        return lambda x: (1 - math.exp(-b * (x - lam) / sigma)) / (b * sigma)
    if variant == "sweet-spot":
        return lambda x: (1 + b) * (x - lam) / (sigma**2 + b * (x - lam) ** 2)
    if variant == "constant-variance":
        g = p["gamma"]
        return lambda x: (x - lam) / (sigma**2 * (g if x > lam else b))
    raise KeyError(variant)


def sandwich(variant, sigma=1.0, lo=-10.0, hi=10.0, **p):
    """(lam, subjective coeff, true coeff) by quadrature + bracketing."""
    es = lambda lam: gauss_expect(score_fn(variant, lam, sigma, **p), sigma)
    lam = optimize.brentq(es, lo * sigma, hi * sigma, xtol=1e-14)
    h = 1e-4 * sigma
    curv = (es(lam + h) - es(lam - h)) / (2 * h)
    s = score_fn(variant, lam, sigma, **p)
    ss = gauss_expect(lambda x: s(x) ** 2, sigma)
    return lam, -1 / (curv * sigma**2), ss / curv**2 / sigma**2


def oracle_In(n, beta):
    """Independent oracle: integral of phi(x) / (1 + beta x^2)^n by adaptive quadrature."""
    f = lambda x: math.exp(-0.5 * x * x) / math.sqrt(2 * math.pi) / (1 + beta * x * x) ** n
    val, _ = integrate.quad(f, -np.inf, np.inf, epsabs=1e-13, epsrel=1e-13, limit=500)
    return val

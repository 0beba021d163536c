"""Normal-distribution kernels and the sweet-spot integrals.

``I1`` and ``I2`` are the Gaussian expectations of ``1 / (1 + beta x^2)`` and
its square. Their closed forms involve ``Phi(-t) * exp(t^2 / 2)`` with
``t = 1 / sqrt(beta)``; evaluated literally that product is ``0 * inf`` for
small ``beta``, so everything goes through the scaled complementary error
function ``erfcx``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .core import ConvergenceFailure, DomainError

SQRT_2PI = math.sqrt(2.0 * math.pi)
_SQRT_HALF = math.sqrt(0.5)


def norm_pdf(x):
    return np.exp(-0.5 * np.square(x)) / SQRT_2PI


def norm_cdf(x):
    return special.ndtr(x)


def scaled_upper_tail(t):
    """``Phi(-t) * exp(t**2 / 2)``, finite for all ``t >= 0``."""
    return 0.5 * special.erfcx(np.asarray(t, dtype=float) * _SQRT_HALF)


# AS 241 (Wichura 1988), PPND16: inverse normal CDF, ~1e-16 relative accuracy.
_A = (3.3871328727963666080e0, 1.3314166789178437745e2, 1.9715909503065514427e3,
      1.3731693765509461125e4, 4.5921953931549871457e4, 6.7265770927008700853e4,
      3.3430575583588128105e4, 2.5090809287301226727e3)
_B = (1.0, 4.2313330701600911252e1, 6.8718700749205790830e2, 5.3941960214247511077e3,
      2.1213794301586595867e4, 3.9307895800092710610e4, 2.8729085735721942674e4,
      5.2264952788528545610e3)
_C = (1.42343711074968357734e0, 4.63033784615654529590e0, 5.76949722146069140550e0,
      3.64784832476320460504e0, 1.27045825245236838258e0, 2.41780725177450611770e-1,
      2.27238449892691845833e-2, 7.74545014278341407640e-4)
_D = (1.0, 2.05319162663775882187e0, 1.67638483018380384940e0, 6.89767334985100004550e-1,
      1.48103976427480074590e-1, 1.51986665636164571966e-2, 5.47593808499534494600e-4,
      1.05075007164441684324e-9)
_E = (6.65790464350110377720e0, 5.46378491116411436990e0, 1.78482653991729133580e0,
      2.96560571828504891230e-1, 2.65321895265761230930e-2, 1.24266094738807843860e-3,
      2.71155556874348757815e-5, 2.01033439929228813265e-7)
_F = (1.0, 5.99832206555887937690e-1, 1.36929880922735805310e-1, 1.48753612908506148525e-2,
      7.86869131145613259100e-4, 1.84631831751005468180e-5, 1.42151175831644588870e-7,
      2.04426310338993978564e-15)


def _poly(coef, r):
    acc = np.full_like(r, coef[-1])
    for c in coef[-2::-1]:
        acc = acc * r + c
    return acc


def norm_ppf(p):
    """Inverse standard-normal CDF by Wichura's AS 241 rational approximation.

    Vectorised over ``p``; ``p`` must lie strictly inside (0, 1).
    """
    p = np.asarray(p, dtype=float)
    scalar = p.ndim == 0
    p = np.atleast_1d(p)
    if not np.all((p > 0.0) & (p < 1.0)):
        raise DomainError("norm_ppf requires 0 < p < 1")
    q = p - 0.5
    z = np.empty_like(p)

    central = np.abs(q) <= 0.425
    if central.any():
        qc = q[central]
        r = 0.180625 - qc * qc
        z[central] = qc * _poly(_A, r) / _poly(_B, r)

    tail = ~central
    if tail.any():
        r = np.sqrt(-np.log(np.minimum(p[tail], 1.0 - p[tail])))
        zt = np.empty_like(r)
        near = r <= 5.0
        rn = r[near] - 1.6
        zt[near] = _poly(_C, rn) / _poly(_D, rn)
        rf = r[~near] - 5.0
        zt[~near] = _poly(_E, rf) / _poly(_F, rf)
        z[tail] = np.where(q[tail] < 0, -zt, zt)

    return z[0] if scalar else z


def _check_beta(beta: float) -> float:
    beta = float(beta)
    if not beta > 0 or not math.isfinite(beta):
        raise DomainError(f"beta must be positive and finite, got {beta}")
    return beta


# Below this beta the closed forms lose digits to cancellation between terms
# of size 1/beta; the asymptotic series in beta is used instead.
SERIES_CUTOFF = 1e-2
_SERIES_TERMS = 30


def _series_terms(beta: float):
    """``(k, (-beta)^k E[Z^(2k)])`` for ``k = 0 .. 29``."""
    term = 1.0
    for k in range(_SERIES_TERMS):
        yield k, term
        term *= -beta * (2 * k + 1)


def sweet_spot_moments(beta: float) -> tuple[float, float]:
    """``(I1 - I2, 2 I2 - I1)`` without cancellation for small ``beta``."""
    beta = _check_beta(beta)
    if beta >= SERIES_CUTOFF:
        i1, i2 = I1(beta), I2(beta)
        return i1 - i2, 2 * i2 - i1
    # I1 = sum t_k, I2 = sum (k + 1) t_k
    diff = math.fsum(-k * t for k, t in _series_terms(beta))
    curv = math.fsum((2 * k + 1) * t for k, t in _series_terms(beta))
    return diff, curv


def I1(beta: float) -> float:
    """``E[1 / (1 + beta Z^2)]`` for standard normal ``Z``."""
    beta = _check_beta(beta)
    if beta < SERIES_CUTOFF:
        return math.fsum(t for _, t in _series_terms(beta))
    return float(math.sqrt(2.0 * math.pi / beta) * scaled_upper_tail(1.0 / math.sqrt(beta)))


def I2(beta: float) -> float:
    """``E[1 / (1 + beta Z^2)^2]`` for standard normal ``Z``."""
    beta = _check_beta(beta)
    if beta < SERIES_CUTOFF:
        return math.fsum((k + 1) * t for k, t in _series_terms(beta))
    tail = float(scaled_upper_tail(1.0 / math.sqrt(beta)))
    return 0.5 / beta - math.sqrt(math.pi / 2.0) * (1.0 - beta) / beta**1.5 * tail


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    half_width: float = 12.0
    max_subintervals: int = 200

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("quadrature tolerances must be positive")
        if self.half_width < 8:
            raise DomainError("half_width must be at least 8")


def In_quadrature(n: int, beta: float, spec: QuadratureSpec = QuadratureSpec()) -> float:
    """Adaptive Gauss-Kronrod evaluation of ``I1`` (``n=1``) or ``I2`` (``n=2``).

    Independent of the closed forms; used to check them.
    """
    if n not in (1, 2):
        raise DomainError("n must be 1 or 2")
    beta = _check_beta(beta)
    h = spec.half_width

    def f(x):
        return math.exp(-0.5 * x * x) / (SQRT_2PI * (1.0 + beta * x * x) ** n)

    # the integrand is even; integrate one side and split at the knee 1/sqrt(beta)
    knee = min(1.0 / math.sqrt(beta), h / 2)
    total = 0.0
    for lo, hi in ((0.0, knee), (knee, h)):
        total += _quad(f, lo, hi, spec)[0]
    return 2.0 * total


def _quad(f, lo, hi, spec):
    out = integrate.quad(
        f, lo, hi, epsabs=spec.abs_tol / 4, epsrel=spec.rel_tol / 4,
        limit=spec.max_subintervals, full_output=1,
    )
    if len(out) == 4:  # quad only appends a message when ier != 0
        raise ConvergenceFailure(out[3])
    return out[0], out[1], out[2]


def log_beta(a, b):
    return special.betaln(a, b)


def beta_ratio(a1, b1, a0, b0) -> float:
    """``B(a1, b1) / B(a0, b0)`` via log-gamma differences."""
    return math.exp(log_beta(a1, b1) - log_beta(a0, b0))

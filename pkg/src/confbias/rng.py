"""Reproducible random streams.

Stream ``i`` of master seed ``s`` is a Philox-4x64 counter-based generator
keyed by ``numpy.random.SeedSequence(s, spawn_key=(i,))``. Streams are
independent of one another and of the order in which they are consumed.

Uniforms take the top 53 bits of each 64-bit word and sit at the centre of
their cell, ``(k + 0.5) / 2**53``, so they never equal 0 or 1. Normal
variates are the AS 241 inverse CDF of those uniforms; beta variates use an
order statistic of uniforms for integer shapes and the inverse regularised
incomplete beta function otherwise.
"""

from __future__ import annotations

import numpy as np
from scipy import special

from .special import norm_ppf

_TWO_M53 = 2.0**-53


def bit_generator(seed: int, index: int) -> np.random.Philox:
    return np.random.Philox(np.random.SeedSequence(seed, spawn_key=(index,)))


class Stream:
    """Sequential draws from stream ``index`` of master ``seed``."""

    def __init__(self, seed: int, index: int = 0):
        self.seed = seed
        self.index = index
        self._bg = bit_generator(seed, index)

    def uniform(self, n: int) -> np.ndarray:
        raw = self._bg.random_raw(n)
        return ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * _TWO_M53

    def normal(self, n: int, mean: float = 0.0, sd: float = 1.0) -> np.ndarray:
        return mean + sd * norm_ppf(self.uniform(n))

    def beta(self, n: int, a: float, b: float) -> np.ndarray:
        if float(a).is_integer() and float(b).is_integer() and a + b - 1 <= 64:
            k, m = int(a), int(a + b - 1)
            u = self.uniform(n * m).reshape(n, m)
            return np.partition(u, k - 1, axis=1)[:, k - 1]
        return special.betaincinv(a, b, self.uniform(n))


def normals(seed: int, index: int, n: int, mean: float = 0.0, sd: float = 1.0) -> np.ndarray:
    return Stream(seed, index).normal(n, mean, sd)

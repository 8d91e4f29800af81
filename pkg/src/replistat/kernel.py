"""Deterministic special functions and seeded random-number streams.

Every other module builds on the handful of routines here so that numeric
conventions (validation, clamping, determinism) live in one place.  The
continuous special functions are thin validated wrappers around SciPy's
Cephes-backed implementations; the binomial CDF/PMF are evaluated by direct
summation of probability-mass terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

__all__ = [
    "chi_square_sf",
    "normal_cdf",
    "normal_quantile",
    "binomial_pmf",
    "binomial_cdf",
    "RngStream",
]

_MASK64 = (1 << 64) - 1

# Above this, binomial coefficients leave exact float range; switch to logs.
_BINOM_DIRECT_LIMIT = 200


def chi_square_sf(x: float, df: int) -> float:
    """Survival probability P(X >= x) for X chi-square with even ``df``.

    Computed through the regularized upper incomplete gamma function
    Q(df/2, x/2), which SciPy evaluates by a power series for small
    arguments and a continued fraction otherwise.  One code path covers
    every even ``df`` instead of special-casing low-df closed forms.
    """
    if not isinstance(df, (int, np.integer)):
        raise TypeError(f"df must be an integer, got {df!r}")
    if df <= 0 or df % 2 != 0:
        raise ValueError(f"df must be a positive even integer, got {df}")
    x = float(x)
    if not math.isfinite(x) or x < 0:
        raise ValueError(f"x must be a finite non-negative real, got {x}")
    return float(special.gammaincc(df / 2.0, x / 2.0))


def normal_cdf(z: float) -> float:
    """Standard normal CDF Phi(z)."""
    return float(special.ndtr(float(z)))


def normal_quantile(p: float) -> float:
    """Standard normal quantile Phi^-1(p) for p strictly inside (0, 1)."""
    p = float(p)
    if not 0.0 < p < 1.0:
        raise ValueError(f"quantile requires 0 < p < 1, got {p}")
    return float(special.ndtri(p))


def _validate_binomial(trials: int, prob: float) -> float:
    if not isinstance(trials, (int, np.integer)) or trials < 0:
        raise ValueError(f"trials must be a non-negative integer, got {trials!r}")
    prob = float(prob)
    if not 0.0 <= prob <= 1.0:
        raise ValueError(f"prob must be in [0, 1], got {prob}")
    return prob


def binomial_pmf(k: int, trials: int, prob: float) -> float:
    """P(X = k) for X ~ Binomial(trials, prob), exact term evaluation."""
    prob = _validate_binomial(trials, prob)
    k = int(k)
    if k < 0 or k > trials:
        return 0.0
    if prob == 0.0:
        return 1.0 if k == 0 else 0.0
    if prob == 1.0:
        return 1.0 if k == trials else 0.0
    if trials <= _BINOM_DIRECT_LIMIT:
        return math.comb(trials, k) * prob**k * (1.0 - prob) ** (trials - k)
    log_term = (
        math.lgamma(trials + 1)
        - math.lgamma(k + 1)
        - math.lgamma(trials - k + 1)
        + k * math.log(prob)
        + (trials - k) * math.log1p(-prob)
    )
    return math.exp(log_term)


def binomial_cdf(k: int, trials: int, prob: float) -> float:
    """P(X <= k) for X ~ Binomial(trials, prob) by summing pmf terms.

    ``binomial_cdf(-1, n, p) == 0`` and ``binomial_cdf(n, n, p) == 1``
    hold exactly.
    """
    _validate_binomial(trials, prob)
    k = int(k)
    if k < 0:
        return 0.0
    if k >= trials:
        return 1.0
    total = 0.0
    for j in range(k + 1):
        total += binomial_pmf(j, trials, prob)
    return min(total, 1.0)


@dataclass(frozen=True)
class RngStream:
    """A named, reproducible random stream.

    Streams are backed by the counter-based Philox generator keyed with
    ``(master_seed, stream_id)``, so disjoint stream ids give statistically
    independent sequences without any coordination, and identical
    constructions replay identical draws on every platform.
    """

    master_seed: int
    stream_id: int = 0

    def __post_init__(self) -> None:
        if self.stream_id < 0:
            raise ValueError(f"stream_id must be non-negative, got {self.stream_id}")

    def generator(self) -> np.random.Generator:
        """A fresh Generator positioned at the start of this stream."""
        key = np.array(
            [self.master_seed & _MASK64, self.stream_id & _MASK64], dtype=np.uint64
        )
        return np.random.Generator(np.random.Philox(key=key))

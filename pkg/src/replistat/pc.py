"""Combination p-values for "at least r of n studies have signal" questions.

Given right-sided per-study p-values for one feature, this module computes
the combined p-value for the composite null "fewer than r studies have a
(right-sided) effect", its two-sided directional version, the confidence
lower bound on the number of studies with an effect, and the truncation
adjustment that guards a combination against publication bias.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special

from .kernel import chi_square_sf

__all__ = [
    "PcResult",
    "fisher_pc_pvalue",
    "stouffer_pc_pvalue",
    "pc_pvalue",
    "fisher_pc_profile",
    "directional_pc_pvalue",
    "studies_lower_bound",
    "selection_bias_adjust",
    "bias_adjusted_pvalues",
    "COMBINERS",
]

# Floor applied before logarithms; an exact zero p-value is treated as the
# smallest positive normal double so the combination stays finite.
MIN_PVALUE = 1e-300

_MAX_PVALUE = 1.0 - 1e-16


def _validate_pvalues(pvalues) -> np.ndarray:
    p = np.asarray(pvalues, dtype=float).ravel()
    if p.size == 0:
        raise ValueError("need at least one p-value")
    if np.any(~np.isfinite(p)) or np.any(p < 0.0) or np.any(p > 1.0):
        raise ValueError("p-values must all lie in [0, 1]")
    return p


def _validate_r(r: int, n: int) -> int:
    r = int(r)
    if not 1 <= r <= n:
        raise ValueError(f"r must satisfy 1 <= r <= n={n}, got {r}")
    return r


def fisher_pc_pvalue(pvalues, r: int) -> float:
    """Fisher-type combined p-value for "fewer than r of n studies have signal".

    The n - r + 1 largest p-values are pooled with Fisher's method: under
    the least favorable configuration of the composite null those entries
    are independent uniforms, so -2 * sum(log p) is chi-square with
    2(n - r + 1) degrees of freedom.  ``r = 1`` is the usual meta-analytic
    global null; ``r = n`` reduces to the maximum p-value.
    """
    p = _validate_pvalues(pvalues)
    r = _validate_r(r, p.size)
    tail = np.sort(p)[r - 1 :]
    stat = -2.0 * float(np.log(np.clip(tail, MIN_PVALUE, None)).sum())
    return chi_square_sf(stat, 2 * (p.size - r + 1))


def stouffer_pc_pvalue(pvalues, r: int) -> float:
    """Stouffer-type combined p-value over the n - r + 1 largest p-values.

    Optional alternative to the Fisher combiner; pools normal quantiles
    instead of log p-values.
    """
    p = _validate_pvalues(pvalues)
    r = _validate_r(r, p.size)
    tail = np.clip(np.sort(p)[r - 1 :], MIN_PVALUE, _MAX_PVALUE)
    z = special.ndtri(1.0 - tail).sum() / np.sqrt(tail.size)
    return float(special.ndtr(-z))


COMBINERS = {
    "fisher": fisher_pc_pvalue,
    "stouffer": stouffer_pc_pvalue,
}


def pc_pvalue(pvalues, r: int, combiner: str = "fisher") -> float:
    """Combined p-value for the r-of-n signal question with a named combiner."""
    try:
        fn = COMBINERS[combiner]
    except KeyError:
        raise ValueError(
            f"unknown combiner {combiner!r}; choose from {sorted(COMBINERS)}"
        ) from None
    return fn(pvalues, r)


def fisher_pc_profile(pmat) -> np.ndarray:
    """All Fisher combined p-values for r = 1..n, per row of an m x n matrix.

    Returns an m x n array whose (i, r-1) entry is the combined p-value of
    row i at threshold r.  One vectorized pass; used by the bound and
    screening procedures that test r in increasing order.
    """
    p = np.atleast_2d(np.asarray(pmat, dtype=float))
    if np.any(~np.isfinite(p)) or np.any(p < 0.0) or np.any(p > 1.0):
        raise ValueError("p-values must all lie in [0, 1]")
    m, n = p.shape
    logs = np.log(np.clip(np.sort(p, axis=1), MIN_PVALUE, None))
    # stat(r) = -2 * sum of logs from position r-1 on: a reversed cumsum.
    suffix = np.cumsum(logs[:, ::-1], axis=1)[:, ::-1]
    shapes = np.arange(n, 0, -1, dtype=float)
    return special.gammaincc(shapes[None, :], -suffix)


@dataclass(frozen=True)
class PcResult:
    """Outcome of a directional combination: level r, p-value, declared side."""

    r: int
    pvalue: float
    direction: str  # "right", "left", or "none"


def directional_pc_pvalue(
    pvalues, r: int, combiner: str = "fisher", left_pvalues=None
) -> PcResult:
    """Two-sided combined p-value with a declared common direction.

    Right- and left-sided combinations are computed separately and the
    smaller one is doubled (capped at 1).  Left-sided inputs default to
    ``1 - p``, the continuous-statistic convention; pass ``left_pvalues``
    explicitly for discrete statistics.  Ties between the two sides are
    declared "right".
    """
    p = _validate_pvalues(pvalues)
    q = 1.0 - p if left_pvalues is None else _validate_pvalues(left_pvalues)
    if q.size != p.size:
        raise ValueError("left_pvalues must match pvalues in length")
    right = pc_pvalue(p, r, combiner)
    left = pc_pvalue(q, r, combiner)
    pooled = min(1.0, 2.0 * min(right, left))
    direction = "right" if right <= left else "left"
    return PcResult(r=int(r), pvalue=pooled, direction=direction)


def studies_lower_bound(pvalues, alpha: float, combiner: str = "fisher") -> int:
    """Confidence lower bound on the number of studies with signal.

    Tests the combined p-values in order r = 1, 2, ... at level ``alpha``
    and returns the longest prefix of passes (the r = 0 case passes by
    definition).  The result is an integer in {0, ..., n}.
    """
    p = _validate_pvalues(pvalues)
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    bound = 0
    for r in range(1, p.size + 1):
        if pc_pvalue(p, r, combiner) <= alpha:
            bound = r
        else:
            break
    return bound


def selection_bias_adjust(p: float, threshold: float) -> float | None:
    """Truncation adjustment for combining only published (small) p-values.

    A p-value at most ``threshold`` is inflated to ``p / threshold``; a
    larger one is excluded from combination, signalled by ``None``.
    """
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"threshold must be in (0, 1), got {threshold}")
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p}")
    if p > threshold:
        return None
    return p / threshold


def bias_adjusted_pvalues(pvalues, threshold: float) -> tuple[np.ndarray, np.ndarray]:
    """Vector version of :func:`selection_bias_adjust`.

    Returns ``(adjusted, kept)`` where ``kept`` indexes the studies that
    survive the truncation and ``adjusted`` holds their inflated p-values.
    Combining the adjusted values treats the kept studies as the full set;
    if fewer than r survive, the r-of-n question cannot be rejected.
    """
    p = _validate_pvalues(pvalues)
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"threshold must be in (0, 1), got {threshold}")
    kept = np.nonzero(p <= threshold)[0]
    return p[kept] / threshold, kept

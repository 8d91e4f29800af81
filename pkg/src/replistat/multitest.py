"""Single-family multiple-testing procedures used as building blocks.

Bonferroni, Holm, Hochberg, and Benjamini-Hochberg, each returning the
rejection set, adjusted p-values, and the effective p-value cutoff, plus
the Storey null-proportion estimator used by the plug-in screen variants.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "MtResult",
    "bonferroni",
    "holm",
    "hochberg",
    "bh",
    "storey_pi0",
    "adjusted_pvalues",
]


@dataclass(frozen=True)
class MtResult:
    """Rejections at a fixed level together with level-free adjusted p-values.

    ``rejected`` always equals ``{i: adjusted[i] <= alpha}`` (non-strict) for
    the level the procedure was run at.  ``threshold`` is the critical
    p-value constant at the boundary step, for reporting.
    """

    rejected: np.ndarray
    adjusted: np.ndarray
    threshold: float
    alpha: float

    def rejected_mask(self) -> np.ndarray:
        mask = np.zeros(self.adjusted.size, dtype=bool)
        mask[self.rejected] = True
        return mask


def _validate(pvalues, alpha: float) -> np.ndarray:
    p = np.asarray(pvalues, dtype=float).ravel()
    if p.size and (np.any(~np.isfinite(p)) or np.any(p < 0.0) or np.any(p > 1.0)):
        raise ValueError("p-values must all lie in [0, 1]")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    return p


def adjusted_pvalues(pmat, method: str) -> np.ndarray:
    """Adjusted p-values along the last axis of a 1-D or 2-D array.

    Ties are broken by a stable sort on (p-value, index) so results are
    deterministic across platforms.  Values are capped at 1.
    """
    p = np.asarray(pmat, dtype=float)
    squeeze = p.ndim == 1
    p = np.atleast_2d(p)
    k, m = p.shape
    if m == 0:
        out = p.copy()
        return out[0] if squeeze else out
    order = np.argsort(p, axis=1, kind="stable")
    rows = np.arange(k)[:, None]
    ps = np.take_along_axis(p, order, axis=1)
    ranks = np.arange(1, m + 1, dtype=float)

    if method == "bonferroni":
        adj_sorted = m * ps
    elif method == "holm":
        adj_sorted = np.maximum.accumulate((m - ranks + 1.0) * ps, axis=1)
    elif method == "hochberg":
        raw = (m - ranks + 1.0) * ps
        adj_sorted = np.minimum.accumulate(raw[:, ::-1], axis=1)[:, ::-1]
    elif method == "bh":
        raw = m * ps / ranks
        adj_sorted = np.minimum.accumulate(raw[:, ::-1], axis=1)[:, ::-1]
    else:
        raise ValueError(f"unknown method {method!r}")

    adj = np.empty_like(p)
    adj[rows, order] = np.minimum(adj_sorted, 1.0)
    return adj[0] if squeeze else adj


def _result(p: np.ndarray, adjusted: np.ndarray, alpha: float, threshold: float) -> MtResult:
    rejected = np.nonzero(adjusted <= alpha)[0]
    return MtResult(rejected=rejected, adjusted=adjusted, threshold=threshold, alpha=alpha)


def bonferroni(pvalues, alpha: float) -> MtResult:
    """Reject every p-value at most alpha / m."""
    p = _validate(pvalues, alpha)
    m = p.size
    if m == 0:
        return MtResult(np.empty(0, dtype=int), np.empty(0), 0.0, alpha)
    return _result(p, adjusted_pvalues(p, "bonferroni"), alpha, alpha / m)


def holm(pvalues, alpha: float) -> MtResult:
    """Holm's step-down procedure."""
    p = _validate(pvalues, alpha)
    m = p.size
    if m == 0:
        return MtResult(np.empty(0, dtype=int), np.empty(0), 0.0, alpha)
    res = _result(p, adjusted_pvalues(p, "holm"), alpha, 0.0)
    n_rej = res.rejected.size
    threshold = alpha if n_rej == m else alpha / (m - n_rej)
    return MtResult(res.rejected, res.adjusted, threshold, alpha)


def hochberg(pvalues, alpha: float) -> MtResult:
    """Hochberg's step-up procedure."""
    p = _validate(pvalues, alpha)
    m = p.size
    if m == 0:
        return MtResult(np.empty(0, dtype=int), np.empty(0), 0.0, alpha)
    res = _result(p, adjusted_pvalues(p, "hochberg"), alpha, 0.0)
    n_rej = res.rejected.size
    threshold = alpha / (m - n_rej + 1) if n_rej else alpha / m
    return MtResult(res.rejected, res.adjusted, threshold, alpha)


def bh(pvalues, alpha: float) -> MtResult:
    """Benjamini-Hochberg step-up procedure."""
    p = _validate(pvalues, alpha)
    m = p.size
    if m == 0:
        return MtResult(np.empty(0, dtype=int), np.empty(0), 0.0, alpha)
    res = _result(p, adjusted_pvalues(p, "bh"), alpha, 0.0)
    threshold = res.rejected.size * alpha / m
    return MtResult(res.rejected, res.adjusted, threshold, alpha)


def storey_pi0(pvalues, lam: float = 0.5) -> float:
    """Plug-in estimate of the proportion of true nulls.

    Counts p-values above the tuning point ``lam`` and rescales by the
    width of the censored region; capped at 1.  An empty family is all
    null by convention.
    """
    if not 0.0 < lam < 1.0:
        raise ValueError(f"lam must be in (0, 1), got {lam}")
    p = np.asarray(pvalues, dtype=float).ravel()
    if p.size == 0:
        return 1.0
    if np.any(~np.isfinite(p)) or np.any(p < 0.0) or np.any(p > 1.0):
        raise ValueError("p-values must all lie in [0, 1]")
    return min(1.0, float(np.sum(p > lam)) / ((1.0 - lam) * p.size))

"""Nonparametric comparison of algorithms on hypervolume samples.

Higher scores are better everywhere in this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import stats as sps

__all__ = [
    "InvalidInput",
    "WilcoxonResult",
    "ComparisonReport",
    "friedman_ranks",
    "wilcoxon_signed_rank",
    "holm_bonferroni",
    "compare_against_best",
]

EXACT_MAX_N = 25


class InvalidInput(ValueError):
    pass


def _matrix(scores) -> np.ndarray:
    try:
        arr = np.asarray(scores, dtype=float)
    except ValueError as exc:
        raise InvalidInput(f"score matrix must be rectangular: {exc}") from None
    if arr.ndim != 2:
        raise InvalidInput(f"score matrix must be 2-D, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise InvalidInput("score matrix needs at least one row and one column")
    if not np.all(np.isfinite(arr)):
        raise InvalidInput("score matrix contains missing or non-finite values")
    return arr


def friedman_ranks(scores) -> np.ndarray:
    """Mean rank per column; rank 1 is the highest score in a row, ties share the average."""
    arr = _matrix(scores)
    ranks = sps.rankdata(-arr, method="average", axis=1)
    return ranks.mean(axis=0)


@dataclass(frozen=True)
class WilcoxonResult:
    statistic: float
    pvalue: float
    n: int
    degenerate: bool
    method: str


def _exact_pvalue(ranks: np.ndarray, w_plus: float) -> float:
    doubled = np.rint(2 * ranks).astype(np.int64)
    total = int(doubled.sum())
    counts = np.zeros(total + 1)
    counts[0] = 1.0
    for r in doubled:
        shifted = counts[:-r].copy()
        counts[r:] += shifted
    observed = int(round(2 * w_plus))
    lower = counts[: observed + 1].sum()
    upper = counts[observed:].sum()
    p = 2.0 * min(lower, upper) / counts.sum()
    return min(1.0, p)


def wilcoxon_signed_rank(x, y) -> WilcoxonResult:
    """Two-sided Wilcoxon signed-rank test on paired samples.

    Zero differences are dropped. Up to 25 remaining pairs the p-value is exact,
    counting every sign assignment of the (possibly tied) ranks; above that a
    normal approximation with tie and continuity corrections is used.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise InvalidInput("paired samples must be 1-D and of equal length")
    d = x - y
    d = d[d != 0]
    n = len(d)
    if n == 0:
        return WilcoxonResult(0.0, 1.0, 0, True, "degenerate")
    ranks = sps.rankdata(np.abs(d), method="average")
    w_plus = float(ranks[d > 0].sum())
    if n <= EXACT_MAX_N:
        return WilcoxonResult(w_plus, _exact_pvalue(ranks, w_plus), n, False, "exact")

    mean = n * (n + 1) / 4.0
    _, tie_counts = np.unique(ranks, return_counts=True)
    var = n * (n + 1) * (2 * n + 1) / 24.0 - np.sum(tie_counts**3 - tie_counts) / 48.0
    z = max(0.0, abs(w_plus - mean) - 0.5) / np.sqrt(var)
    return WilcoxonResult(w_plus, float(min(1.0, 2 * sps.norm.sf(z))), n, False, "normal")


def holm_bonferroni(pvals: Sequence[float], alpha: float = 0.05):
    """Holm step-down adjustment.

    Returns ``(adjusted, reject)`` in the input order; ``reject`` is
    ``adjusted < alpha``.
    """
    p = np.asarray(pvals, dtype=float).reshape(-1)
    if np.any(~np.isfinite(p)) or np.any((p < 0) | (p > 1)):
        raise InvalidInput("p-values must lie in [0, 1]")
    m = len(p)
    order = np.argsort(p, kind="stable")
    scaled = (m - np.arange(m)) * p[order]
    adjusted_sorted = np.minimum(1.0, np.maximum.accumulate(scaled))
    adjusted = np.empty(m)
    adjusted[order] = adjusted_sorted
    return adjusted, adjusted < alpha


@dataclass(frozen=True)
class ComparisonReport:
    algorithms: tuple[str, ...]
    mean_ranks: tuple[float, ...]
    best: str
    p_raw: tuple[float, ...]
    p_adjusted: tuple[float, ...]
    indistinguishable: tuple[bool, ...]
    alpha: float

    def rows(self):
        for i, name in enumerate(self.algorithms):
            yield {
                "algorithm": name,
                "mean_rank": self.mean_ranks[i],
                "best": name == self.best,
                "p_raw": self.p_raw[i],
                "p_holm": self.p_adjusted[i],
                "indistinguishable": self.indistinguishable[i],
            }


def compare_against_best(samples, alpha: float = 0.05, algorithms: Sequence[str] | None = None) -> ComparisonReport:
    """Rank algorithms and test each one against the best-ranked.

    ``samples`` has shape ``(cells, algorithms, runs)`` (or ``(algorithms,
    runs)`` for one cell). Every ``(cell, run)`` pair is one Friedman block and
    one Wilcoxon pair. The best algorithm has the lowest mean rank, with ties
    broken by the smallest name. Holm's correction runs over the comparisons
    against the best; an algorithm is indistinguishable when its adjusted
    p-value is at least ``alpha``. The best algorithm's own p-values are NaN.
    """
    arr = np.asarray(samples, dtype=float)
    if arr.ndim == 2:
        arr = arr[None]
    if arr.ndim != 3:
        raise InvalidInput("samples must have shape (cells, algorithms, runs)")
    K = arr.shape[1]
    names = tuple(algorithms) if algorithms is not None else tuple(str(i) for i in range(K))
    if len(names) != K or len(set(names)) != K:
        raise InvalidInput("algorithm names must be unique and match the sample columns")
    blocks = arr.transpose(0, 2, 1).reshape(-1, K)
    ranks = friedman_ranks(blocks)
    best = min(range(K), key=lambda j: (ranks[j], names[j]))

    others = [j for j in range(K) if j != best]
    raw = np.full(K, np.nan)
    adj = np.full(K, np.nan)
    flags = np.ones(K, dtype=bool)
    if others:
        p = np.array([wilcoxon_signed_rank(blocks[:, best], blocks[:, j]).pvalue for j in others])
        p_adj, reject = holm_bonferroni(p, alpha)
        raw[others] = p
        adj[others] = p_adj
        flags[others] = ~reject
    return ComparisonReport(
        algorithms=names,
        mean_ranks=tuple(float(r) for r in ranks),
        best=names[best],
        p_raw=tuple(float(v) for v in raw),
        p_adjusted=tuple(float(v) for v in adj),
        indistinguishable=tuple(bool(f) for f in flags),
        alpha=alpha,
    )

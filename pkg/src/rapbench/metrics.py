"""Front quality measures for (cost, availability) outcomes.

Cost is minimised and availability maximised throughout. Points are plain
``(cost, availability)`` pairs; arrays have shape ``(n, 2)``.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np

from .ctmc import Strategy

__all__ = [
    "ReferencePoint",
    "UndefinedMetric",
    "pareto_indices",
    "pareto_filter",
    "hypervolume_2d",
    "derive_reference",
    "relative_distance",
    "strategy_proportions",
]


class UndefinedMetric(ValueError):
    pass


class ReferencePoint(NamedTuple):
    cost: float
    availability: float


def _points(points) -> np.ndarray:
    arr = np.asarray(points, dtype=float)
    if arr.size == 0:
        return np.empty((0, 2))
    arr = arr.reshape(-1, 2)
    if not np.all(np.isfinite(arr)):
        raise ValueError("objective points must be finite")
    return arr


def pareto_indices(points) -> np.ndarray:
    """Indices of the nondominated points, sorted by increasing cost.

    Exact duplicates are collapsed onto their first occurrence.
    """
    pts = _points(points)
    if len(pts) == 0:
        return np.empty(0, dtype=np.int64)
    # cost ascending, availability descending, original index ascending
    order = np.lexsort((np.arange(len(pts)), -pts[:, 1], pts[:, 0]))
    avail = pts[order, 1]
    keep = np.r_[True, avail[1:] > np.maximum.accumulate(avail)[:-1]]
    return order[keep].astype(np.int64)


def pareto_filter(points) -> np.ndarray:
    pts = _points(points)
    return pts[pareto_indices(pts)]


def hypervolume_2d(front, ref: ReferencePoint) -> float:
    """Area dominated by ``front`` and bounded by ``ref``.

    Points that do not strictly beat the reference in both objectives add
    nothing.
    """
    pts = pareto_filter(front)
    cost_ref, avail_ref = float(ref[0]), float(ref[1])
    pts = pts[(pts[:, 0] < cost_ref) & (pts[:, 1] > avail_ref)]
    if len(pts) == 0:
        return 0.0
    # nondominated and sorted by cost, so availability also ascends
    widths = cost_ref - pts[:, 0]
    heights = np.diff(np.r_[avail_ref, pts[:, 1]])
    return float(np.sum(widths * heights))


def derive_reference(pooled) -> ReferencePoint:
    """Worst cost and worst availability among the pooled nondominated points."""
    front = pareto_filter(pooled)
    if len(front) == 0:
        raise ValueError("cannot derive a reference point from an empty pool")
    return ReferencePoint(float(front[:, 0].max()), float(front[:, 1].min()))


def relative_distance(hv: float, hv_best: float) -> float:
    """``1 - hv / hv_best``; 0 means the best-found hypervolume was reached."""
    if not hv_best > 0:
        raise UndefinedMetric("relative distance needs a positive best hypervolume")
    if hv < 0:
        raise ValueError("hypervolume cannot be negative")
    ratio = hv / hv_best
    if ratio > 1 + 1e-12:
        raise ValueError(f"hypervolume {hv!r} exceeds the best-found value {hv_best!r}")
    return max(0.0, 1.0 - ratio)


def strategy_proportions(
    strategies: Sequence[Sequence[int]],
    points=None,
    scope: str = "all",
) -> dict[str, float]:
    """Fraction of subsystem-level assignments using each strategy.

    ``strategies`` holds one strategy vector per solution. With
    ``scope="pareto_only"`` the matching objective ``points`` are required and
    only nondominated solutions are counted (one per distinct point).
    """
    rows = [list(map(int, s)) for s in strategies]
    if not rows:
        raise ValueError("strategy_proportions needs at least one solution")
    if scope == "pareto_only":
        if points is None or len(points) != len(rows):
            raise ValueError("pareto_only scope needs one objective point per solution")
        rows = [rows[i] for i in pareto_indices(points)]
    elif scope != "all":
        raise ValueError(f"unknown scope {scope!r}")
    counts = np.bincount(np.concatenate([np.asarray(r, dtype=np.int64) for r in rows]), minlength=4)
    fractions = counts / counts.sum()
    return {s.name.lower(): float(fractions[s]) for s in Strategy}

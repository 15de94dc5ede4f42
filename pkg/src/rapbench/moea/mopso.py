"""Multi-objective particle swarm with a crowding-pruned external archive."""

from __future__ import annotations

import numpy as np

from ..rap import SPARES_RANGE, STRATEGY_RANGE, random_init
from .core import Batch, OptimizerConfig, Problem, crowding_distance, dominance_matrix, nondominated_sort

VELOCITY_FRACTION = 0.5


def _bounds(m: int):
    lo = np.r_[np.full(m, SPARES_RANGE[0]), np.full(m, STRATEGY_RANGE[0])].astype(float)
    hi = np.r_[np.full(m, SPARES_RANGE[1]), np.full(m, STRATEGY_RANGE[1])].astype(float)
    return lo, hi


def update_archive(archive: Batch | None, new: Batch, cap: int) -> Batch:
    """Constrained-nondominated members of ``archive`` and ``new``, pruned to ``cap``.

    Pruning repeatedly drops the member with the smallest crowding distance,
    recomputing distances after every removal.
    """
    merged = new if archive is None else Batch.concat(archive, new)
    first = nondominated_sort(merged.cost, merged.availability, merged.violation, min_count=1)[0]
    # identical objective vectors add nothing to the archive
    pts = np.column_stack([merged.cost[first], merged.availability[first], merged.violation[first]])
    _, uniq = np.unique(pts, axis=0, return_index=True)
    members = first[np.sort(uniq)]
    while len(members) > cap:
        d = crowding_distance(merged.cost[members], merged.availability[members])
        members = np.delete(members, int(np.argmin(d)))
    return merged.take(members)


def select_leaders(archive: Batch, count: int, rng: np.random.Generator) -> np.ndarray:
    d = crowding_distance(archive.cost, archive.availability)
    a = rng.integers(0, len(archive), size=count)
    b = rng.integers(0, len(archive), size=count)
    return np.where(d[b] > d[a], b, a)


def update_personal_best(pbest: Batch, current: Batch, rng: np.random.Generator) -> Batch:
    """Replace a personal best when the new position dominates it, or on a coin flip when neither dominates."""
    n = len(pbest)
    both = Batch.concat(pbest, current)
    D = dominance_matrix(both.cost, both.availability, both.violation)
    new_wins = D[np.arange(n) + n, np.arange(n)]
    old_wins = D[np.arange(n), np.arange(n) + n]
    coin = rng.random(n) < 0.5
    replace = new_wins | (~old_wins & coin)
    idx = np.where(replace, np.arange(n) + n, np.arange(n))
    return both.take(idx)


def mopso(problem: Problem, cfg: OptimizerConfig, rng: np.random.Generator) -> Batch:
    N = cfg.pop_size
    dim = 2 * problem.inst.m
    lo, hi = _bounds(problem.inst.m)
    vmax = VELOCITY_FRACTION * (hi - lo)
    pm = cfg.mutation_prob if cfg.mutation_prob is not None else 1.0 / dim

    X = random_init(N, problem.inst, rng, encoding="real")
    V = np.zeros_like(X)
    swarm = problem.evaluate_real(X)
    pbest = swarm
    archive = update_archive(None, swarm, N)
    while problem.evaluations + N <= cfg.budget:
        leaders = archive.genotypes[select_leaders(archive, N, rng)]
        r1 = rng.random(X.shape)
        r2 = rng.random(X.shape)
        V = cfg.inertia * V + cfg.cognitive * r1 * (pbest.genotypes - X) + cfg.social * r2 * (leaders - X)
        V = np.clip(V, -vmax, vmax)
        X = X + V
        turbulent = rng.random(X.shape) < pm
        X = np.where(turbulent, rng.uniform(lo, hi, size=X.shape), X)
        outside = (X < lo) | (X > hi)
        X = np.clip(X, lo, hi)
        V = np.where(outside, 0.0, V)
        swarm = problem.evaluate_real(X)
        pbest = update_personal_best(pbest, swarm, rng)
        archive = update_archive(archive, swarm, N)
    return archive

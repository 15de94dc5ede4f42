"""SPEA2 on binary genotypes."""

from __future__ import annotations

import numpy as np

from .core import Batch, OptimizerConfig, Problem, dominance_matrix
from .operators import bitflip_mutation, initial_bits, uniform_crossover


def _normalised(batch: Batch) -> np.ndarray:
    objs = np.column_stack([batch.cost, -batch.availability])
    lo, hi = objs.min(axis=0), objs.max(axis=0)
    span = np.where(hi > lo, hi - lo, 1.0)
    return (objs - lo) / span


def fitness(batch: Batch) -> tuple[np.ndarray, np.ndarray]:
    """Raw strength fitness plus k-th nearest-neighbour density; also returns distances."""
    D = dominance_matrix(batch.cost, batch.availability, batch.violation)
    strength = D.sum(axis=1)
    raw = (D * strength[:, None]).sum(axis=0)
    objs = _normalised(batch)
    dist = np.sqrt(((objs[:, None, :] - objs[None, :, :]) ** 2).sum(axis=-1))
    np.fill_diagonal(dist, np.inf)
    k = min(int(np.sqrt(len(batch))), len(batch) - 1)
    kth = np.sort(dist, axis=1)[:, k - 1] if k >= 1 else np.zeros(len(batch))
    return raw + 1.0 / (kth + 2.0), dist


def truncate(dist: np.ndarray, members: np.ndarray, size: int) -> np.ndarray:
    """Drop the most crowded member, one at a time, until ``size`` remain.

    Crowding compares the sorted distance-to-neighbour vectors
    lexicographically; the first index wins remaining ties.
    """
    alive = list(members)
    while len(alive) > size:
        sub = dist[np.ix_(alive, alive)]
        cand = np.arange(len(alive))
        ordered = None
        col = 0
        while len(cand) > 1 and col < len(alive) - 1:
            if ordered is None:
                ordered = np.sort(sub[cand], axis=1)
            vals = ordered[:, col]
            tie = vals == vals.min()
            cand, ordered = cand[tie], ordered[tie]
            col += 1
        alive.pop(int(cand[0]))
    return np.asarray(alive, dtype=np.int64)


def environmental_selection(batch: Batch, size: int):
    fit, dist = fitness(batch)
    nondom = np.flatnonzero(fit < 1.0)
    if len(nondom) > size:
        chosen = truncate(dist, nondom, size)
    else:
        chosen = np.argsort(fit, kind="stable")[:size]
    return chosen, fit[chosen]


def spea2(problem: Problem, cfg: OptimizerConfig, rng: np.random.Generator) -> Batch:
    N = cfg.pop_size
    L = problem.inst.genome_length
    pm = cfg.mutation_prob if cfg.mutation_prob is not None else 1.0 / L
    pop = problem.evaluate_binary(initial_bits(cfg, problem.inst, rng))
    idx, fit = environmental_selection(pop, N)
    archive = pop.take(idx)
    while problem.evaluations + N <= cfg.budget:
        n_pairs = (N + 1) // 2
        a = rng.integers(0, len(archive), size=2 * n_pairs)
        b = rng.integers(0, len(archive), size=2 * n_pairs)
        parents = np.where(fit[b] < fit[a], b, a)
        children = uniform_crossover(archive.genotypes[parents], cfg.crossover_prob, rng)[:N]
        children = bitflip_mutation(children, pm, rng)
        merged = Batch.concat(archive, problem.evaluate_binary(children))
        idx, fit = environmental_selection(merged, N)
        archive = merged.take(idx)
    return archive

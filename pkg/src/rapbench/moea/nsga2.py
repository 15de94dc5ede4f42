"""NSGA-II on binary genotypes."""

from __future__ import annotations

import numpy as np

from .core import Batch, OptimizerConfig, Problem, crowding_distance, nondominated_sort
from .operators import bitflip_mutation, initial_bits, uniform_crossover


def rank_and_crowd(batch: Batch, keep: int):
    """Pick ``keep`` survivors by front then crowding; returns (indices, rank, crowding)."""
    fronts = nondominated_sort(batch.cost, batch.availability, batch.violation, min_count=keep)
    chosen, ranks, crowd = [], [], []
    for r, front in enumerate(fronts):
        d = crowding_distance(batch.cost[front], batch.availability[front])
        room = keep - sum(len(c) for c in chosen)
        if len(front) > room:
            order = np.argsort(-d, kind="stable")[:room]
            front, d = front[order], d[order]
        chosen.append(front)
        ranks.append(np.full(len(front), r))
        crowd.append(d)
        if sum(len(c) for c in chosen) >= keep:
            break
    return np.concatenate(chosen), np.concatenate(ranks), np.concatenate(crowd)


def tournament(rank, crowd, count, rng):
    a = rng.integers(0, len(rank), size=count)
    b = rng.integers(0, len(rank), size=count)
    b_wins = (rank[b] < rank[a]) | ((rank[b] == rank[a]) & (crowd[b] > crowd[a]))
    return np.where(b_wins, b, a)


def nsga2(problem: Problem, cfg: OptimizerConfig, rng: np.random.Generator) -> Batch:
    N = cfg.pop_size
    L = problem.inst.genome_length
    pm = cfg.mutation_prob if cfg.mutation_prob is not None else 1.0 / L
    pop = problem.evaluate_binary(initial_bits(cfg, problem.inst, rng))
    idx, rank, crowd = rank_and_crowd(pop, N)
    pop = pop.take(idx)
    while problem.evaluations + N <= cfg.budget:
        n_pairs = (N + 1) // 2
        parents = tournament(rank, crowd, 2 * n_pairs, rng)
        children = uniform_crossover(pop.genotypes[parents], cfg.crossover_prob, rng)[:N]
        children = bitflip_mutation(children, pm, rng)
        merged = Batch.concat(pop, problem.evaluate_binary(children))
        idx, rank, crowd = rank_and_crowd(merged, N)
        pop = merged.take(idx)
    return pop

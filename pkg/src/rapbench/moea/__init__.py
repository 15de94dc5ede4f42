"""Multi-objective optimizers for the redundancy allocation problem."""

from __future__ import annotations

import dataclasses

import numpy as np

from ..rap import InstanceSpec
from .core import (
    ALGORITHMS,
    INITS,
    Batch,
    Checkpoint,
    OptimizerConfig,
    Problem,
    RunTrace,
    crowding_distance,
    default_checkpoints,
    dominance_matrix,
    dominates,
    nondominated_sort,
)
from .mopso import mopso
from .nsga2 import nsga2
from .spea2 import spea2

__all__ = [
    "ALGORITHMS",
    "INITS",
    "Checkpoint",
    "OptimizerConfig",
    "RunTrace",
    "crowding_distance",
    "default_checkpoints",
    "dominance_matrix",
    "dominates",
    "nondominated_sort",
    "run",
]

_OPTIMIZERS = {"nsga2": nsga2, "spea2": spea2, "mopso": mopso}


def _population_dict(pop: Batch) -> dict:
    return {
        "spares": pop.spares.astype(int).tolist(),
        "strategies": pop.strategies.astype(int).tolist(),
        "cost": [float(v) for v in pop.cost],
        "availability": [float(v) for v in pop.availability],
        "weight": [float(v) for v in pop.weight],
        "violation": [float(v) for v in pop.violation],
    }


def run(algorithm: str, inst: InstanceSpec, cfg: OptimizerConfig) -> RunTrace:
    """Run one optimizer until no further whole generation fits in the budget.

    The trace holds the best-found feasible nondominated set at each
    checkpoint. Runs are reproducible from ``cfg.seed``.
    """
    if cfg.algorithm != algorithm:
        cfg = dataclasses.replace(cfg, algorithm=algorithm)
    rng = np.random.default_rng(cfg.seed)
    problem = Problem(inst, cfg.checkpoints)
    final = _OPTIMIZERS[algorithm](problem, cfg, rng)
    problem.finish()
    return RunTrace(
        algorithm=algorithm,
        problem_id=inst.problem_id,
        seed=cfg.seed,
        config=cfg.to_dict(),
        evaluations=problem.evaluations,
        checkpoints=problem.checkpoints,
        final_population=_population_dict(final),
    )

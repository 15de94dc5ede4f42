"""Shared machinery for the optimizers: configuration, dominance, archives, traces."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from ..metrics import pareto_indices
from ..rap import Evaluation, Evaluator, InstanceSpec, InvalidConfig, decode_binary_batch, decode_real_batch

__all__ = [
    "ALGORITHMS",
    "INITS",
    "OptimizerConfig",
    "Checkpoint",
    "RunTrace",
    "default_checkpoints",
    "dominates",
    "dominance_matrix",
    "nondominated_sort",
    "crowding_distance",
    "Batch",
    "Problem",
]

ALGORITHMS = ("nsga2", "spea2", "mopso")
INITS = ("ri", "sbi")


def default_checkpoints(pop_size: int, budget: int) -> tuple[int, ...]:
    """1-2-5 grid of evaluation counts from ``pop_size`` up to ``budget`` (always included)."""
    grid = set()
    for exponent in range(0, int(math.log10(max(budget, 1))) + 2):
        for mantissa in (1, 2, 5):
            value = mantissa * 10**exponent
            if pop_size <= value <= budget:
                grid.add(value)
    grid.add(budget)
    return tuple(sorted(grid))


@dataclass(frozen=True)
class OptimizerConfig:
    algorithm: str = "nsga2"
    pop_size: int = 200
    budget: int = 2_000_000
    init: str = "sbi"
    crossover_prob: float = 0.9
    mutation_prob: float | None = None
    seed: int = 0
    checkpoints: tuple[int, ...] | None = None
    inertia: float = 0.4
    cognitive: float = 2.0
    social: float = 2.0

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise InvalidConfig(f"unknown algorithm {self.algorithm!r}; expected one of {ALGORITHMS}")
        if self.init not in INITS:
            raise InvalidConfig(f"unknown initialisation {self.init!r}; expected one of {INITS}")
        if self.algorithm == "mopso" and self.init == "sbi":
            raise InvalidConfig("mopso uses real encoding; only random initialisation applies")
        if int(self.pop_size) != self.pop_size or self.pop_size < 2:
            raise InvalidConfig("pop_size must be an integer >= 2")
        if int(self.budget) != self.budget or self.budget < self.pop_size:
            raise InvalidConfig("budget must be an integer >= pop_size")
        for name in ("crossover_prob", "mutation_prob"):
            value = getattr(self, name)
            if value is not None and not 0.0 <= value <= 1.0:
                raise InvalidConfig(f"{name} must lie in [0, 1]")
        object.__setattr__(self, "pop_size", int(self.pop_size))
        object.__setattr__(self, "budget", int(self.budget))
        object.__setattr__(self, "seed", int(self.seed))
        if self.checkpoints is None:
            object.__setattr__(self, "checkpoints", default_checkpoints(self.pop_size, self.budget))
        else:
            cps = tuple(int(c) for c in self.checkpoints)
            if not cps or any(b <= a for a, b in zip(cps, cps[1:])):
                raise InvalidConfig("checkpoints must be non-empty and strictly increasing")
            if cps[0] < self.pop_size or cps[-1] > self.budget:
                raise InvalidConfig("checkpoints must lie within [pop_size, budget]")
            object.__setattr__(self, "checkpoints", cps)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["checkpoints"] = list(self.checkpoints)
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "OptimizerConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise InvalidConfig(f"unknown optimizer settings {sorted(unknown)}")
        data = dict(data)
        if data.get("checkpoints") is not None:
            data["checkpoints"] = tuple(data["checkpoints"])
        return cls(**data)


def dominates(a: Evaluation, b: Evaluation) -> bool:
    """Constrained Pareto dominance for (cost down, availability up)."""
    if a.feasible != b.feasible:
        return a.feasible
    if not a.feasible:
        return a.violation < b.violation
    no_worse = a.cost <= b.cost and a.availability >= b.availability
    return no_worse and (a.cost < b.cost or a.availability > b.availability)


def dominance_matrix(cost, availability, violation=None) -> np.ndarray:
    """``D[i, j]`` is True when solution ``i`` dominates solution ``j``."""
    c = np.asarray(cost, dtype=float)
    a = np.asarray(availability, dtype=float)
    v = np.zeros_like(c) if violation is None else np.asarray(violation, dtype=float)
    feas = v == 0
    no_worse = (c[:, None] <= c[None, :]) & (a[:, None] >= a[None, :])
    better = (c[:, None] < c[None, :]) | (a[:, None] > a[None, :])
    pareto = no_worse & better
    both_feasible = feas[:, None] & feas[None, :]
    both_infeasible = ~feas[:, None] & ~feas[None, :]
    return (
        (both_feasible & pareto)
        | (feas[:, None] & ~feas[None, :])
        | (both_infeasible & (v[:, None] < v[None, :]))
    )


def nondominated_sort(cost, availability, violation=None, min_count: int | None = None) -> list[np.ndarray]:
    """Partition indices into successive nondominated fronts.

    With ``min_count`` the sort stops once the returned fronts hold at least
    that many solutions.
    """
    D = dominance_matrix(cost, availability, violation)
    n = D.shape[0]
    dominated_by = D.sum(axis=0)
    remaining = np.ones(n, dtype=bool)
    fronts = []
    taken = 0
    while remaining.any():
        front = np.flatnonzero(remaining & (dominated_by == 0))
        fronts.append(front)
        taken += len(front)
        if min_count is not None and taken >= min_count:
            break
        remaining[front] = False
        dominated_by = dominated_by - D[front].sum(axis=0)
    return fronts


def crowding_distance(cost, availability) -> np.ndarray:
    objs = np.column_stack([np.asarray(cost, dtype=float), np.asarray(availability, dtype=float)])
    n = len(objs)
    dist = np.zeros(n)
    if n <= 2:
        dist[:] = np.inf
        return dist
    for j in range(2):
        order = np.argsort(objs[:, j], kind="stable")
        vals = objs[order, j]
        span = vals[-1] - vals[0]
        dist[order[0]] = dist[order[-1]] = np.inf
        if span > 0:
            dist[order[1:-1]] += (vals[2:] - vals[:-2]) / span
    return dist


@dataclass
class Batch:
    """Evaluated solutions; row ``i`` of every array describes one solution."""

    genotypes: np.ndarray
    spares: np.ndarray
    strategies: np.ndarray
    cost: np.ndarray
    availability: np.ndarray
    weight: np.ndarray
    violation: np.ndarray

    def __len__(self):
        return len(self.cost)

    def take(self, idx) -> "Batch":
        return Batch(*(getattr(self, f.name)[idx] for f in fields(self)))

    @staticmethod
    def concat(a: "Batch", b: "Batch") -> "Batch":
        return Batch(*(np.concatenate([getattr(a, f.name), getattr(b, f.name)]) for f in fields(Batch)))


@dataclass
class Checkpoint:
    budget: int
    evaluations: int
    points: np.ndarray
    spares: np.ndarray
    strategies: np.ndarray

    def to_dict(self) -> dict:
        return {
            "budget": int(self.budget),
            "evaluations": int(self.evaluations),
            "front": [
                {
                    "cost": float(p[0]),
                    "availability": float(p[1]),
                    "spares": [int(x) for x in s],
                    "strategies": [int(x) for x in r],
                }
                for p, s, r in zip(self.points, self.spares, self.strategies)
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Checkpoint":
        front = d["front"]
        m = len(front[0]["spares"]) if front else 0
        return cls(
            budget=int(d["budget"]),
            evaluations=int(d["evaluations"]),
            points=np.array([[e["cost"], e["availability"]] for e in front], dtype=float).reshape(-1, 2),
            spares=np.array([e["spares"] for e in front], dtype=np.int64).reshape(len(front), m),
            strategies=np.array([e["strategies"] for e in front], dtype=np.int64).reshape(len(front), m),
        )


@dataclass
class RunTrace:
    algorithm: str
    problem_id: str
    seed: int
    config: dict
    evaluations: int
    checkpoints: list[Checkpoint] = field(default_factory=list)
    final_population: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "problem_id": self.problem_id,
            "seed": int(self.seed),
            "config": self.config,
            "evaluations": int(self.evaluations),
            "checkpoints": [c.to_dict() for c in self.checkpoints],
            "final_population": self.final_population,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RunTrace":
        return cls(
            algorithm=d["algorithm"],
            problem_id=d["problem_id"],
            seed=int(d["seed"]),
            config=d["config"],
            evaluations=int(d["evaluations"]),
            checkpoints=[Checkpoint.from_dict(c) for c in d["checkpoints"]],
            final_population=d["final_population"],
        )

    def final_front(self) -> Checkpoint:
        return self.checkpoints[-1]


class Problem:
    """Evaluation front-end used by the optimizers.

    Counts evaluations, keeps the run's best-found feasible nondominated set
    (never bounded, so its hypervolume cannot drop) and snapshots that set at
    the exact evaluation counts of the checkpoint schedule.
    """

    def __init__(self, inst: InstanceSpec, checkpoints):
        self.inst = inst
        self.evaluator = Evaluator(inst)
        self.evaluations = 0
        self.pending = list(checkpoints)
        self.checkpoints: list[Checkpoint] = []
        m = inst.m
        self._pts = np.empty((0, 2))
        self._spares = np.empty((0, m), dtype=np.int64)
        self._strategies = np.empty((0, m), dtype=np.int64)

    def evaluate_binary(self, bits) -> Batch:
        spares, strategies = decode_binary_batch(bits)
        return self._evaluate(bits, spares, strategies)

    def evaluate_real(self, X) -> Batch:
        spares, strategies = decode_real_batch(X)
        return self._evaluate(X, spares, strategies)

    def _evaluate(self, genotypes, spares, strategies) -> Batch:
        cost, avail, weight, viol = self.evaluator.evaluate_arrays(spares, strategies)
        batch = Batch(np.asarray(genotypes), spares, strategies, cost, avail, weight, viol)
        start = 0
        while self.pending and self.pending[0] <= self.evaluations + len(batch) - start:
            stop = start + self.pending[0] - self.evaluations
            self._absorb(batch, start, stop)
            self._snapshot(self.pending.pop(0))
            start = stop
        self._absorb(batch, start, len(batch))
        return batch

    def _absorb(self, batch: Batch, start: int, stop: int):
        if stop <= start:
            return
        self.evaluations += stop - start
        sl = slice(start, stop)
        feas = batch.violation[sl] == 0
        if not feas.any():
            return
        pts = np.vstack([self._pts, np.column_stack([batch.cost[sl][feas], batch.availability[sl][feas]])])
        spares = np.vstack([self._spares, batch.spares[sl][feas]])
        strategies = np.vstack([self._strategies, batch.strategies[sl][feas]])
        keep = pareto_indices(pts)
        self._pts, self._spares, self._strategies = pts[keep], spares[keep], strategies[keep]

    def _snapshot(self, budget: int):
        self.checkpoints.append(
            Checkpoint(budget, self.evaluations, self._pts.copy(), self._spares.copy(), self._strategies.copy())
        )

    def finish(self):
        """Record any checkpoint the run did not reach at the final evaluation count."""
        while self.pending:
            self._snapshot(self.pending.pop(0))

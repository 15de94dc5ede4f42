"""Redundancy allocation problem: instances, encodings and objective evaluation."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .ctmc import Strategy, SubsystemParams, subsystem_availability
from .structures import CaseStudy, system_availability

__all__ = [
    "SPARE_BITS",
    "GENE_BITS",
    "MAX_SPARES",
    "SPARES_RANGE",
    "STRATEGY_RANGE",
    "InvalidConfig",
    "InstanceSpec",
    "Phenotype",
    "RealGenotype",
    "Evaluation",
    "Evaluator",
    "bundled_cases",
    "load_instance",
    "read_instance",
    "instance_from_dict",
    "instance_to_dict",
    "encode_binary",
    "decode_binary",
    "decode_binary_batch",
    "decode_real",
    "decode_real_batch",
    "evaluate",
    "sbi_init",
    "random_init",
]

SPARE_BITS = 8
STRATEGY_BITS = 2
GENE_BITS = SPARE_BITS + STRATEGY_BITS
MAX_SPARES = 2**SPARE_BITS - 1
SPARES_RANGE = (0.0, float(MAX_SPARES))
STRATEGY_RANGE = (-0.5, 3.5)

_SPARE_WEIGHTS = 2 ** np.arange(SPARE_BITS - 1, -1, -1)
_STRATEGY_WEIGHTS = np.array([2, 1])
_PARAM_KEYS = ("k", "lambda_working", "lambda_standby", "sigma_cold", "sigma_warm", "mu", "c", "w")


class InvalidConfig(ValueError):
    pass


@dataclass(frozen=True)
class InstanceSpec:
    case: CaseStudy
    subsystems: tuple[SubsystemParams, ...]
    W: float

    def __post_init__(self):
        object.__setattr__(self, "case", CaseStudy.parse(self.case))
        object.__setattr__(self, "subsystems", tuple(self.subsystems))
        if len(self.subsystems) != self.case.m:
            raise InvalidConfig(
                f"{self.case.value} has {self.case.m} subsystems, got {len(self.subsystems)}"
            )
        base = sum(p.w * p.k for p in self.subsystems)
        if base > self.W:
            raise InvalidConfig(f"weight limit {self.W} is below the base configuration weight {base:.4f}")

    @property
    def m(self) -> int:
        return self.case.m

    @property
    def problem_id(self) -> str:
        return f"{self.case.value}-W{self.W:g}"

    @property
    def genome_length(self) -> int:
        return GENE_BITS * self.m


def _table3() -> dict:
    text = resources.files("rapbench").joinpath("data/table3.json").read_text()
    return json.loads(text)


def bundled_cases() -> dict[str, list[float]]:
    """Published weight limits per bundled case study."""
    return {case: list(entry["W"]) for case, entry in _table3().items()}


def _params(rows) -> tuple[SubsystemParams, ...]:
    out = []
    for row in rows:
        missing = [key for key in _PARAM_KEYS if key not in row]
        if missing:
            raise InvalidConfig(f"subsystem entry is missing {missing}")
        out.append(SubsystemParams(**{key: row[key] for key in _PARAM_KEYS}))
    return tuple(out)


def load_instance(case, W) -> InstanceSpec:
    """Bundled instance for ``case`` at one of its published weight limits."""
    case = CaseStudy.parse(case)
    entry = _table3()[case.value]
    if float(W) not in [float(w) for w in entry["W"]]:
        raise InvalidConfig(f"W={W} is not a published limit for {case.value}: {entry['W']}")
    return InstanceSpec(case, _params(entry["subsystems"]), float(W))


def instance_from_dict(data: dict) -> InstanceSpec:
    try:
        return InstanceSpec(CaseStudy.parse(data["case_id"]), _params(data["subsystems"]), float(data["W"]))
    except KeyError as exc:
        raise InvalidConfig(f"instance is missing field {exc}") from None


def instance_to_dict(inst: InstanceSpec) -> dict:
    return {
        "case_id": inst.case.value,
        "W": inst.W,
        "subsystems": [{key: getattr(p, key) for key in _PARAM_KEYS} for p in inst.subsystems],
    }


def read_instance(path) -> InstanceSpec:
    with open(Path(path)) as fh:
        return instance_from_dict(json.load(fh))


@dataclass(frozen=True)
class Phenotype:
    """Spare counts and strategy choices, one entry per subsystem."""

    spares: tuple[int, ...]
    strategies: tuple[Strategy, ...]

    def __post_init__(self):
        spares = tuple(int(s) for s in self.spares)
        strategies = tuple(Strategy.parse(s) for s in self.strategies)
        if len(spares) != len(strategies):
            raise InvalidConfig("spares and strategies must have the same length")
        if any(s < 0 or s > MAX_SPARES for s in spares):
            raise InvalidConfig(f"spare counts must lie in 0..{MAX_SPARES}")
        object.__setattr__(self, "spares", spares)
        object.__setattr__(self, "strategies", strategies)

    def __len__(self):
        return len(self.spares)

    def n(self, inst: InstanceSpec) -> tuple[int, ...]:
        return tuple(p.k + s for p, s in zip(inst.subsystems, self.spares))

    @classmethod
    def from_arrays(cls, spares, strategies) -> "Phenotype":
        return cls(tuple(int(s) for s in spares), tuple(Strategy(int(r)) for r in strategies))


@dataclass(frozen=True)
class RealGenotype:
    spares: tuple[float, ...]
    strategy: tuple[float, ...]


@dataclass(frozen=True)
class Evaluation:
    cost: float
    availability: float
    weight: float
    violation: float

    @property
    def feasible(self) -> bool:
        return self.violation == 0.0


def encode_binary(p: Phenotype) -> np.ndarray:
    """Bit vector with 8 spare bits (most significant first) then 2 strategy bits per subsystem."""
    m = len(p)
    bits = np.zeros((m, GENE_BITS), dtype=np.uint8)
    spares = np.array(p.spares)
    strategies = np.array([int(s) for s in p.strategies])
    bits[:, :SPARE_BITS] = (spares[:, None] // _SPARE_WEIGHTS) % 2
    bits[:, SPARE_BITS:] = (strategies[:, None] // _STRATEGY_WEIGHTS) % 2
    return bits.reshape(-1)


def decode_binary_batch(bits) -> tuple[np.ndarray, np.ndarray]:
    """Decode a ``(P, 10m)`` bit matrix into ``(P, m)`` spare and strategy arrays."""
    bits = np.asarray(bits)
    if bits.ndim == 1:
        bits = bits[None, :]
    P, L = bits.shape
    if L % GENE_BITS:
        raise InvalidConfig(f"binary genotype length {L} is not a multiple of {GENE_BITS}")
    genes = bits.reshape(P, L // GENE_BITS, GENE_BITS).astype(np.int64)
    spares = genes[:, :, :SPARE_BITS] @ _SPARE_WEIGHTS
    strategies = genes[:, :, SPARE_BITS:] @ _STRATEGY_WEIGHTS
    return spares, strategies


def decode_binary(bits) -> Phenotype:
    bits = np.asarray(bits)
    if bits.ndim != 1 or not np.all((bits == 0) | (bits == 1)):
        raise InvalidConfig("binary genotype must be a flat 0/1 vector")
    spares, strategies = decode_binary_batch(bits)
    return Phenotype.from_arrays(spares[0], strategies[0])


def _round_half_up(x):
    return np.floor(x + 0.5).astype(np.int64)


def decode_real_batch(X) -> tuple[np.ndarray, np.ndarray]:
    """Decode ``(P, 2m)`` positions laid out as ``[spares..., strategy...]``.

    Coordinates are clamped into range, then rounded to the nearest integer
    with ties going up.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[None, :]
    m = X.shape[1] // 2
    spares = _round_half_up(np.clip(X[:, :m], *SPARES_RANGE))
    strategies = _round_half_up(np.clip(X[:, m:], *STRATEGY_RANGE))
    return np.clip(spares, 0, MAX_SPARES), np.clip(strategies, 0, 3)


def decode_real(g: RealGenotype) -> Phenotype:
    if len(g.spares) != len(g.strategy):
        raise InvalidConfig("real genotype vectors differ in length")
    spares, strategies = decode_real_batch(np.concatenate([g.spares, g.strategy]))
    return Phenotype.from_arrays(spares[0], strategies[0])


class Evaluator:
    """Vectorised objective evaluation for one instance.

    Subsystem availabilities are looked up in a lazily filled
    ``(m, 4, 256)`` table; entries come from the memoised CTMC solver, so a
    value never depends on evaluation order.
    """

    def __init__(self, inst: InstanceSpec):
        self.inst = inst
        self.k = np.array([p.k for p in inst.subsystems], dtype=np.int64)
        self.c = np.array([p.c for p in inst.subsystems])
        self.w = np.array([p.w for p in inst.subsystems])
        self._table = np.full((inst.m, 4, MAX_SPARES + 1), np.nan)
        self._cols = np.arange(inst.m)

    def subsystem_availabilities(self, spares, strategies) -> np.ndarray:
        spares = np.asarray(spares, dtype=np.int64)
        strategies = np.asarray(strategies, dtype=np.int64)
        cols = np.broadcast_to(self._cols, spares.shape)
        A = self._table[cols, strategies, spares]
        missing = np.isnan(A)
        if missing.any():
            triples = np.unique(np.stack([cols[missing], strategies[missing], spares[missing]], axis=1), axis=0)
            for i, r, s in triples:
                params = self.inst.subsystems[i]
                self._table[i, r, s] = subsystem_availability(params, params.k + int(s), Strategy(int(r)))
            A = self._table[cols, strategies, spares]
        return A

    def evaluate_arrays(self, spares, strategies):
        """Return ``(cost, availability, weight, violation)`` arrays for a batch."""
        spares = np.atleast_2d(np.asarray(spares, dtype=np.int64))
        strategies = np.atleast_2d(np.asarray(strategies, dtype=np.int64))
        if spares.shape[1] != self.inst.m or strategies.shape != spares.shape:
            raise InvalidConfig(f"phenotype batch must have shape (P, {self.inst.m})")
        n = self.k + spares
        cost = (n * self.c).sum(axis=1)
        weight = (n * self.w).sum(axis=1)
        violation = np.maximum(0.0, weight - self.inst.W)
        A = self.subsystem_availabilities(spares, strategies)
        availability = np.asarray(system_availability(self.inst.case, A), dtype=float).reshape(-1)
        return cost, availability, weight, violation

    def evaluate(self, p: Phenotype) -> Evaluation:
        if len(p) != self.inst.m:
            raise InvalidConfig(f"phenotype has {len(p)} subsystems, instance has {self.inst.m}")
        cost, avail, weight, viol = self.evaluate_arrays(
            [p.spares], [[int(s) for s in p.strategies]]
        )
        return Evaluation(float(cost[0]), float(avail[0]), float(weight[0]), float(viol[0]))


def evaluate(inst: InstanceSpec, p: Phenotype) -> Evaluation:
    return Evaluator(inst).evaluate(p)


def sbi_init(pop_size: int, inst: InstanceSpec, rng: np.random.Generator) -> np.ndarray:
    """Scaled binomial initialisation.

    Individual ``i`` sets each bit with probability ``i / (pop_size - 1)``, so
    the population runs from the all-zero genotype to the all-one genotype.
    """
    if pop_size < 2:
        raise InvalidConfig("scaled binomial initialisation needs at least 2 individuals")
    p = np.arange(pop_size) / (pop_size - 1)
    return (rng.random((pop_size, inst.genome_length)) < p[:, None]).astype(np.uint8)


def random_init(pop_size: int, inst: InstanceSpec, rng: np.random.Generator, encoding: str = "binary") -> np.ndarray:
    if pop_size < 1:
        raise InvalidConfig("population size must be positive")
    if encoding == "binary":
        return rng.integers(0, 2, size=(pop_size, inst.genome_length), dtype=np.uint8)
    if encoding == "real":
        lo = np.r_[np.full(inst.m, SPARES_RANGE[0]), np.full(inst.m, STRATEGY_RANGE[0])]
        hi = np.r_[np.full(inst.m, SPARES_RANGE[1]), np.full(inst.m, STRATEGY_RANGE[1])]
        return rng.uniform(lo, hi, size=(pop_size, 2 * inst.m))
    raise InvalidConfig(f"unknown encoding {encoding!r}")

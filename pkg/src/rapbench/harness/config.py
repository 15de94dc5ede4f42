"""Benchmark matrix configuration and deterministic seed derivation."""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from ..moea import INITS, OptimizerConfig
from ..rap import InvalidConfig, load_instance

WORKERS_ENV = "RAPBENCH_WORKERS"
_TEMPLATE_KEYS = {"name", "algorithm", "pop_size", "budget", "crossover_prob", "mutation_prob",
                  "checkpoints", "inertia", "cognitive", "social"}


def derive_seed(master_seed: int, problem_id: str, algorithm_id: str, init: str, run_index: int) -> int:
    """64-bit run seed: first 8 bytes (big-endian) of sha256 over the '|'-joined cell key."""
    key = f"{int(master_seed)}|{problem_id}|{algorithm_id}|{init}|{int(run_index)}".encode()
    return int.from_bytes(hashlib.sha256(key).digest()[:8], "big")


@dataclass(frozen=True)
class Cell:
    case: str
    W: float
    algorithm_id: str
    init: str
    run_index: int
    seed: int
    template: dict

    @property
    def problem_id(self) -> str:
        return load_instance(self.case, self.W).problem_id

    @property
    def method(self) -> str:
        return f"{self.algorithm_id}+{self.init}"

    @property
    def record_name(self) -> str:
        return f"{self.problem_id}__{self.method}__r{self.run_index:03d}.json"

    def optimizer_config(self) -> OptimizerConfig:
        settings = {k: v for k, v in self.template.items() if k != "name"}
        return OptimizerConfig(**settings, init=self.init, seed=self.seed)


@dataclass
class BenchmarkConfig:
    instances: list[tuple[str, float]]
    algorithms: list[dict]
    inits: list[str] = field(default_factory=lambda: ["ri", "sbi"])
    runs_per_cell: int = 10
    output_dir: str = "results"
    parallelism: int = 1
    master_seed: int = 0

    def __post_init__(self):
        if not self.instances:
            raise InvalidConfig("benchmark needs at least one instance")
        if not self.algorithms:
            raise InvalidConfig("benchmark needs at least one algorithm")
        if int(self.runs_per_cell) != self.runs_per_cell or self.runs_per_cell < 1:
            raise InvalidConfig("runs_per_cell must be a positive integer")
        if int(self.parallelism) != self.parallelism or self.parallelism < 1:
            raise InvalidConfig("parallelism must be a positive integer")
        bad = [i for i in self.inits if i not in INITS]
        if bad or not self.inits:
            raise InvalidConfig(f"inits must be a non-empty subset of {INITS}, got {self.inits}")
        self.instances = [(str(case).upper(), float(W)) for case, W in self.instances]
        for case, W in self.instances:
            load_instance(case, W)
        names = []
        for tpl in self.algorithms:
            unknown = set(tpl) - _TEMPLATE_KEYS
            if unknown:
                raise InvalidConfig(f"unknown algorithm template keys {sorted(unknown)}")
            if "algorithm" not in tpl:
                raise InvalidConfig("every algorithm template needs an 'algorithm' entry")
            names.append(tpl.get("name", tpl["algorithm"]))
        if len(set(names)) != len(names):
            raise InvalidConfig("algorithm templates need distinct names")

    @classmethod
    def from_dict(cls, data: dict) -> "BenchmarkConfig":
        data = dict(data)
        unknown = set(data) - {"instances", "algorithms", "inits", "runs_per_cell", "output_dir",
                               "parallelism", "master_seed", "description"}
        if unknown:
            raise InvalidConfig(f"unknown benchmark settings {sorted(unknown)}")
        data.pop("description", None)
        try:
            data["instances"] = [(d["case"], d["W"]) for d in data["instances"]]
        except (KeyError, TypeError):
            raise InvalidConfig("instances must be a list of {case, W} objects") from None
        return cls(**data)

    @classmethod
    def load(cls, path) -> "BenchmarkConfig":
        path = Path(path)
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise InvalidConfig(f"{path}: not valid JSON ({exc})") from None
        return cls.from_dict(data)

    def workers(self) -> int:
        override = os.environ.get(WORKERS_ENV)
        if override:
            try:
                value = int(override)
            except ValueError:
                raise InvalidConfig(f"{WORKERS_ENV} must be an integer, got {override!r}") from None
            if value < 1:
                raise InvalidConfig(f"{WORKERS_ENV} must be positive")
            return value
        return int(self.parallelism)

    def cells(self) -> list[Cell]:
        """The run matrix in a fixed order; mopso is only paired with random initialisation."""
        out = []
        for case, W in self.instances:
            problem_id = load_instance(case, W).problem_id
            for tpl in self.algorithms:
                alg_id = tpl.get("name", tpl["algorithm"])
                for init in self.inits:
                    if tpl["algorithm"] == "mopso" and init == "sbi":
                        continue
                    for r in range(self.runs_per_cell):
                        seed = derive_seed(self.master_seed, problem_id, alg_id, init, r)
                        out.append(Cell(case, W, alg_id, init, r, seed, dict(tpl)))
        return out


def bundled_config(name: str) -> Path:
    """Path of a shipped benchmark configuration ("desk" or "full")."""
    ref = resources.files("rapbench") / "configs" / f"{name}.json"
    if not ref.is_file():
        raise InvalidConfig(f"no bundled configuration named {name!r}")
    return Path(str(ref))

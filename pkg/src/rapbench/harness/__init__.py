"""Benchmark orchestration: configuration, run matrix, records, analysis and CLI."""

from .analyze import NoRecords, analyze, load_traces
from .bench import execute_cell, read_record, run_benchmark
from .config import BenchmarkConfig, Cell, bundled_config, derive_seed

__all__ = [
    "BenchmarkConfig",
    "Cell",
    "NoRecords",
    "analyze",
    "bundled_config",
    "derive_seed",
    "execute_cell",
    "load_traces",
    "read_record",
    "run_benchmark",
]

"""Run matrix execution and record persistence."""

from __future__ import annotations

import json
import logging
import os
import tempfile
import time
import traceback
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from ..moea import run
from ..rap import load_instance
from .config import BenchmarkConfig, Cell

log = logging.getLogger(__name__)

RECORDS_DIR = "records"
TIMINGS_DIR = "timings"
INDEX_FILE = "index.json"


def dumps(obj) -> str:
    """Canonical JSON text: sorted keys, shortest round-trip floats, trailing newline."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=True) + "\n"


def atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_record(path) -> dict:
    return json.loads(Path(path).read_text())


def execute_cell(cell: Cell) -> tuple[dict, float]:
    """Run one cell; failures become a record with status "failed" instead of raising."""
    inst = load_instance(cell.case, cell.W)
    record = {
        "problem_id": inst.problem_id,
        "case": cell.case,
        "W": cell.W,
        "algorithm": cell.algorithm_id,
        "init": cell.init,
        "method": cell.method,
        "run": cell.run_index,
        "seed": cell.seed,
    }
    start = time.perf_counter()
    try:
        cfg = cell.optimizer_config()
        trace = run(cfg.algorithm, inst, cfg)
    except Exception as exc:
        record["status"] = "failed"
        record["error"] = f"{type(exc).__name__}: {exc}"
        record["traceback"] = traceback.format_exc()
    else:
        record["status"] = "ok"
        record["trace"] = trace.to_dict()
    return record, time.perf_counter() - start


def _run_and_store(cell: Cell, out_dir: Path) -> str:
    record, seconds = execute_cell(cell)
    atomic_write(out_dir / RECORDS_DIR / cell.record_name, dumps(record))
    atomic_write(
        out_dir / TIMINGS_DIR / cell.record_name,
        dumps({"record": cell.record_name, "wall_time_s": seconds}),
    )
    return record["status"]


def _is_complete(path: Path) -> bool:
    try:
        return read_record(path).get("status") == "ok"
    except (OSError, json.JSONDecodeError):
        return False


def run_benchmark(cfg: BenchmarkConfig, output_dir=None, workers: int | None = None) -> dict:
    """Execute every missing cell of the matrix and write the index.

    Records that already exist with status "ok" are kept; failed or
    unreadable ones are re-run. Returns the index document.
    """
    out_dir = Path(output_dir if output_dir is not None else cfg.output_dir)
    cells = cfg.cells()
    todo = [c for c in cells if not _is_complete(out_dir / RECORDS_DIR / c.record_name)]
    workers = workers or cfg.workers()
    log.info("%d cells in matrix, %d to run, %d worker(s)", len(cells), len(todo), workers)
    (out_dir / RECORDS_DIR).mkdir(parents=True, exist_ok=True)
    if workers > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for cell, status in zip(todo, pool.map(_run_and_store, todo, [out_dir] * len(todo))):
                log.info("%s: %s", cell.record_name, status)
    else:
        for cell in todo:
            log.info("%s: %s", cell.record_name, _run_and_store(cell, out_dir))

    entries = []
    for cell in cells:
        rec = read_record(out_dir / RECORDS_DIR / cell.record_name)
        entries.append({
            "file": f"{RECORDS_DIR}/{cell.record_name}",
            "problem_id": rec["problem_id"],
            "method": rec["method"],
            "run": rec["run"],
            "seed": rec["seed"],
            "status": rec["status"],
        })
    index = {"master_seed": cfg.master_seed, "records": entries}
    atomic_write(out_dir / INDEX_FILE, dumps(index))
    failed = sum(e["status"] != "ok" for e in entries)
    if failed:
        log.warning("%d run(s) failed; see their records for diagnostics", failed)
    return index

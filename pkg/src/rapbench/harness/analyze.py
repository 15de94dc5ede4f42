"""Turn run records into hypervolume, ranking and strategy-proportion reports."""

from __future__ import annotations

import csv
import io
import logging
import math
from collections import defaultdict
from pathlib import Path

import numpy as np

from ..metrics import (
    UndefinedMetric,
    derive_reference,
    hypervolume_2d,
    pareto_filter,
    relative_distance,
    strategy_proportions,
)
from ..moea import RunTrace
from ..stats import compare_against_best
from .bench import RECORDS_DIR, atomic_write, dumps, read_record

log = logging.getLogger(__name__)

REPORTS_DIR = "reports"
STRATEGY_COLUMNS = ("cold", "warm", "mixed", "hot")


class NoRecords(RuntimeError):
    pass


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def load_traces(results_dir) -> dict[str, dict[str, dict[int, RunTrace]]]:
    """Successful runs keyed by problem id, then method, then run index."""
    paths = sorted((Path(results_dir) / RECORDS_DIR).glob("*.json"))
    grouped: dict = defaultdict(lambda: defaultdict(dict))
    for path in paths:
        rec = read_record(path)
        if rec.get("status") != "ok":
            log.warning("%s: skipping failed run (%s)", path.name, rec.get("error", "unknown error"))
            continue
        grouped[rec["problem_id"]][rec["method"]][int(rec["run"])] = RunTrace.from_dict(rec["trace"])
    if not grouped:
        raise NoRecords(f"no successful run records under {Path(results_dir) / RECORDS_DIR}")
    return grouped


def analyze(results_dir, out_dir=None, alpha: float = 0.05) -> dict:
    """Write the report files for every record under ``results_dir``; returns the summary."""
    results_dir = Path(results_dir)
    out_dir = Path(out_dir) if out_dir is not None else results_dir / REPORTS_DIR
    grouped = load_traces(results_dir)

    ref_rows, hv_rows, conv_rows, prop_rows = [], [], [], []
    hv_table: dict = {}  # (problem, method, run, budget) -> hv
    problems = {}
    for pid in sorted(grouped):
        methods = grouped[pid]
        finals = [t.final_front() for runs in methods.values() for t in runs.values()]
        pooled = np.vstack([c.points for c in finals]) if finals else np.empty((0, 2))
        if len(pooled) == 0:
            log.warning("%s: no feasible solutions in any run; problem skipped", pid)
            problems[pid] = {"skipped": True}
            continue
        ref = derive_reference(pooled)
        best_front = pareto_filter(pooled)
        hv_best = hypervolume_2d(best_front, ref)
        problems[pid] = {
            "skipped": False,
            "reference": {"cost": ref.cost, "availability": ref.availability},
            "hv_best": hv_best,
            "best_front_size": int(len(best_front)),
        }
        ref_rows.append([pid, ref.cost, ref.availability, hv_best, len(best_front)])

        for method in sorted(methods):
            runs = methods[method]
            per_budget = defaultdict(list)
            for r in sorted(runs):
                for cp in runs[r].checkpoints:
                    hv = hypervolume_2d(cp.points, ref)
                    try:
                        rd = relative_distance(hv, hv_best)
                    except UndefinedMetric:
                        rd = math.nan
                    hv_rows.append([pid, method, r, cp.budget, cp.evaluations, hv, rd])
                    hv_table[(pid, method, r, cp.budget)] = hv
                    per_budget[cp.budget].append((hv, rd))
            for budget in sorted(per_budget):
                vals = np.array(per_budget[budget])
                conv_rows.append([pid, method, budget, len(vals), float(vals[:, 0].mean()), float(vals[:, 1].mean())])

            fronts = [runs[r].final_front() for r in sorted(runs) if len(runs[r].final_front().points)]
            if fronts:
                strategies = np.vstack([f.strategies for f in fronts])
                points = np.vstack([f.points for f in fronts])
                for scope in ("all", "pareto_only"):
                    props = strategy_proportions(strategies, points, scope=scope)
                    count = len(strategies) if scope == "all" else len(pareto_filter(points))
                    prop_rows.append([pid, method, scope, *(props[c] for c in STRATEGY_COLUMNS), count])

    rank_rows, best_by_budget = _rank_reports(grouped, problems, hv_table, alpha)

    files = {
        "reference_points.csv": _csv(
            ["problem_id", "cost_ref", "availability_ref", "hv_best", "best_front_size"], ref_rows),
        "hv.csv": _csv(
            ["problem_id", "method", "run", "budget", "evaluations", "hv", "relative_distance"], hv_rows),
        "convergence.csv": _csv(
            ["problem_id", "method", "budget", "runs", "mean_hv", "mean_relative_distance"], conv_rows),
        "ranks.csv": _csv(
            ["budget", "method", "mean_rank", "best", "p_raw", "p_holm", "indistinguishable"], rank_rows),
        "proportions.csv": _csv(
            ["problem_id", "method", "scope", *STRATEGY_COLUMNS, "solutions"], prop_rows),
    }
    summary = {
        "alpha": alpha,
        "problems": problems,
        "methods": sorted({m for pid in grouped for m in grouped[pid]}),
        "best_by_budget": best_by_budget,
    }
    files["summary.json"] = dumps(summary)
    for name, text in files.items():
        atomic_write(out_dir / name, text)
    return summary


def _rank_reports(grouped, problems, hv_table, alpha):
    """Friedman/Wilcoxon/Holm comparison per budget over the problems every method solved."""
    active = [pid for pid in sorted(grouped) if not problems[pid]["skipped"]]
    if not active:
        return [], {}
    methods = sorted(set.intersection(*(set(grouped[pid]) for pid in active)))
    usable = [pid for pid in active if set(grouped[pid]) >= set(methods)]
    runs = sorted(set.intersection(*(set(grouped[pid][m]) for pid in usable for m in methods)))
    if not methods or not runs:
        log.warning("no common methods and runs across problems; rank report is empty")
        return [], {}
    budgets = sorted(
        set.intersection(*(
            {cp.budget for cp in grouped[pid][m][r].checkpoints}
            for pid in usable for m in methods for r in runs
        ))
    )
    rows, best = [], {}
    for budget in budgets:
        samples = np.array([
            [[hv_table[(pid, m, r, budget)] for r in runs] for m in methods]
            for pid in usable
        ])
        report = compare_against_best(samples, alpha=alpha, algorithms=methods)
        best[str(budget)] = report.best
        for row in report.rows():
            rows.append([budget, row["algorithm"], row["mean_rank"], row["best"],
                         row["p_raw"], row["p_holm"], row["indistinguishable"]])
    return rows, best

"""Command-line entry point: ``rapbench {evaluate,solve,bench,analyze,report}``."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from ..moea import OptimizerConfig, run
from ..rap import Evaluator, InvalidConfig, Phenotype, load_instance, read_instance
from .analyze import REPORTS_DIR, analyze
from .bench import atomic_write, dumps, run_benchmark
from .config import BenchmarkConfig, bundled_config

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2

log = logging.getLogger("rapbench")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.replace(" ", "").split(",") if v != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _instance(args):
    if args.instance:
        return read_instance(args.instance)
    if args.case is None or args.W is None:
        raise UsageError("give either --instance FILE or both --case and --W")
    return load_instance(args.case, args.W)


def _phenotype(args, m: int) -> Phenotype:
    if args.phenotype:
        try:
            data = json.loads(Path(args.phenotype).read_text())
            spares, strategies = data["spares"], data["strategies"]
        except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
            raise UsageError(f"cannot read phenotype file {args.phenotype}: {exc}") from None
    else:
        if args.spares is None or args.strategies is None:
            raise UsageError("give either --phenotype FILE or both --spares and --strategies")
        spares, strategies = args.spares, args.strategies
    if len(spares) != m or len(strategies) != m:
        raise UsageError(f"phenotype needs {m} spares and {m} strategies, got {len(spares)} and {len(strategies)}")
    return Phenotype(tuple(spares), tuple(strategies))


def cmd_evaluate(args) -> int:
    inst = _instance(args)
    ev = Evaluator(inst).evaluate(_phenotype(args, inst.m))
    print(f"cost {ev.cost!r}")
    print(f"availability {ev.availability!r}")
    print(f"weight {ev.weight!r}")
    print(f"violation {ev.violation!r}")
    print(f"feasible {str(ev.feasible).lower()}")
    return EXIT_OK


def cmd_solve(args) -> int:
    inst = _instance(args)
    kwargs = {"algorithm": args.algorithm, "init": args.init, "pop_size": args.pop_size,
              "budget": args.budget, "seed": args.seed}
    if args.checkpoints:
        kwargs["checkpoints"] = tuple(args.checkpoints)
    cfg = OptimizerConfig(**kwargs)
    trace = run(cfg.algorithm, inst, cfg)
    if args.output:
        atomic_write(Path(args.output), dumps(trace.to_dict()))
    front = trace.final_front()
    print(f"{inst.problem_id} {cfg.algorithm}+{cfg.init} seed={cfg.seed} evaluations={trace.evaluations}")
    print(f"final front: {len(front.points)} solution(s)")
    for (cost, avail), spares, strategies in zip(front.points, front.spares, front.strategies):
        print(f"  cost={cost!r} availability={avail!r} spares={list(map(int, spares))} "
              f"strategies={list(map(int, strategies))}")
    return EXIT_OK


def _load_config(args) -> BenchmarkConfig:
    path = bundled_config(args.config[1:]) if args.config.startswith("@") else Path(args.config)
    try:
        return BenchmarkConfig.load(path)
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None


def cmd_bench(args) -> int:
    cfg = _load_config(args)
    index = run_benchmark(cfg, output_dir=args.output_dir, workers=args.workers)
    failed = sum(e["status"] != "ok" for e in index["records"])
    print(f"{len(index['records'])} record(s), {failed} failed")
    return EXIT_RUNTIME if failed else EXIT_OK


def cmd_analyze(args) -> int:
    summary = analyze(args.results_dir, out_dir=args.out, alpha=args.alpha)
    skipped = [p for p, info in summary["problems"].items() if info["skipped"]]
    print(f"analysed {len(summary['problems']) - len(skipped)} problem(s); skipped {len(skipped)}")
    return EXIT_OK


def _read_csv(path: Path) -> list[dict]:
    with path.open() as fh:
        return list(csv.DictReader(fh))


def cmd_report(args) -> int:
    reports = Path(args.reports_dir)
    if (reports / REPORTS_DIR).is_dir():
        reports = reports / REPORTS_DIR
    if not (reports / "summary.json").is_file():
        raise UsageError(f"{reports} holds no analysis output; run 'rapbench analyze' first")
    ranks = _read_csv(reports / "ranks.csv")
    if ranks:
        final = max(int(r["budget"]) for r in ranks)
        print(f"Ranking at {final} evaluations (lower mean rank is better)")
        for r in sorted((r for r in ranks if int(r["budget"]) == final), key=lambda r: float(r["mean_rank"])):
            mark = "best" if r["best"] == "true" else ("tie" if r["indistinguishable"] == "true" else "")
            print(f"  {r['method']:<16} {float(r['mean_rank']):7.3f}  p_holm={r['p_holm']:<22} {mark}")
    print("Strategy proportions on the pooled Pareto set")
    print(f"  {'problem':<12} {'method':<16} cold  warm  mixed hot")
    for r in _read_csv(reports / "proportions.csv"):
        if r["scope"] == "pareto_only":
            cells = " ".join(f"{float(r[c]):.2f}" for c in ("cold", "warm", "mixed", "hot"))
            print(f"  {r['problem_id']:<12} {r['method']:<16} {cells}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rapbench", description="Redundancy allocation benchmark toolkit.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_instance_args(p):
        p.add_argument("--instance", help="instance JSON file")
        p.add_argument("--case", help="bundled case study, e.g. CS1")
        p.add_argument("--W", type=float, help="weight limit of the bundled case study")

    p = sub.add_parser("evaluate", help="evaluate one spare/strategy assignment")
    add_instance_args(p)
    p.add_argument("--phenotype", help='JSON file with "spares" and "strategies" lists')
    p.add_argument("--spares", type=_int_list, help="comma-separated spare counts")
    p.add_argument("--strategies", type=_int_list, help="comma-separated strategy codes (0 cold .. 3 hot)")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("solve", help="run one optimizer once")
    add_instance_args(p)
    p.add_argument("--algorithm", default="nsga2", choices=["nsga2", "spea2", "mopso"])
    p.add_argument("--init", default="sbi", choices=["ri", "sbi"])
    p.add_argument("--pop-size", type=int, default=200)
    p.add_argument("--budget", type=int, default=200_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--checkpoints", type=_int_list, help="comma-separated evaluation counts")
    p.add_argument("--output", help="write the run trace JSON here")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", help="run a benchmark matrix from a JSON config (@desk, @full for bundled ones)")
    p.add_argument("config")
    p.add_argument("--output-dir", help="override the config's output directory")
    p.add_argument("--workers", type=int, help="worker processes (RAPBENCH_WORKERS also overrides)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("analyze", help="compute reports from a results directory")
    p.add_argument("results_dir")
    p.add_argument("--out", help=f"report directory (default RESULTS_DIR/{REPORTS_DIR})")
    p.add_argument("--alpha", type=float, default=0.05)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("report", help="print rankings and strategy proportions from analysis output")
    p.add_argument("reports_dir")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, InvalidConfig, ValueError) as exc:
        print(f"rapbench: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:
        print(f"rapbench: failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())

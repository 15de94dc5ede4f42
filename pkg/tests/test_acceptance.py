"""Acceptance suite: one test (or group) per criterion, tagged test_ac<n>_."""

import itertools

import numpy as np
import pytest

from rapbench.ctmc import Strategy, subsystem_availability
from rapbench.harness import BenchmarkConfig, analyze, run_benchmark
from rapbench.metrics import ReferencePoint, derive_reference, hypervolume_2d, strategy_proportions
from rapbench.moea import OptimizerConfig, run
from rapbench.rap import bundled_cases, load_instance
from rapbench.simulation import simulate_availability
from rapbench.stats import compare_against_best, holm_bonferroni, wilcoxon_signed_rank
from rapbench.structures import CaseStudy, structure_predicate, system_availability

from oracles import birth_death_hot_availability, monte_carlo_area, rectangle_union_area

SEEDS = range(10)
FULL_BUDGET = 200_000


# AC1

def test_ac1_hot_chain_matches_birth_death():
    for p in load_instance("CS1", 60).subsystems:
        for extra in range(10):
            n = p.k + extra
            got = subsystem_availability(p, n, Strategy.HOT)
            assert abs(got - birth_death_hot_availability(n, p.k, p.lambda_working, p.mu)) <= 1e-10


# AC2

SIM_CASES = [("CS1", 1, 1), ("CS2", 3, 2), ("CS4", 4, 3), ("CS5", 2, 2), ("CS6", 10, 1)]


@pytest.mark.parametrize("strategy", [Strategy.COLD, Strategy.WARM, Strategy.MIXED], ids=str)
def test_ac2_chain_inside_simulation_band(strategy):
    for seed, (case, row, extra) in enumerate(SIM_CASES):
        p = load_instance(case, min(bundled_cases()[case])).subsystems[row]
        n = p.k + extra
        mean, se = simulate_availability(p, n, strategy, horizon=1e6, seed=100 + seed)
        exact = subsystem_availability(p, n, strategy)
        assert abs(exact - mean) <= 3 * se, (case, row, n, exact, mean, se)


# AC3

def enumerate_from_vertices(case, A):
    """Sum of vertex probabilities over the working vertices of the structure predicate."""
    vertices = np.array(list(itertools.product((0, 1), repeat=case.m)), dtype=bool)
    working = vertices[[structure_predicate(case, v) for v in vertices]]
    out = np.empty(len(A))
    for i, a in enumerate(A):
        out[i] = np.where(working, a, 1 - a).prod(axis=1).sum()
    return out


@pytest.mark.parametrize("case", list(CaseStudy), ids=lambda c: c.value)
def test_ac3_closed_form_matches_enumeration(case):
    A = np.random.default_rng(case.m * 7 + ord(case.value[-1])).random((1000, case.m))
    gap = np.abs(system_availability(case, A) - enumerate_from_vertices(case, A))
    assert gap.max() <= 1e-12


@pytest.mark.parametrize("case", list(CaseStudy), ids=lambda c: c.value)
def test_ac3_vertices_binary_and_monotone(case):
    vertices = np.array(list(itertools.product((0.0, 1.0), repeat=case.m)))
    values = system_availability(case, vertices)
    assert np.all((np.abs(values) <= 1e-9) | (np.abs(values - 1) <= 1e-9))
    up = dict(zip(map(tuple, vertices.astype(int)), values > 0.5))
    for x, works in up.items():
        if not works:
            continue
        for i in range(case.m):
            if x[i] == 0:
                assert up[x[:i] + (1,) + x[i + 1:]]


# AC4

def test_ac4_hypervolume_worked_example():
    assert hypervolume_2d([(10, 0.9), (20, 0.99)], ReferencePoint(30, 0.5)) == pytest.approx(8.9, abs=1e-12)


def test_ac4_hypervolume_against_oracles():
    rng = np.random.default_rng(0)
    ref = ReferencePoint(100.0, 0.5)
    z = []
    for _ in range(100):
        size = int(rng.integers(1, 51))
        front = np.column_stack([rng.uniform(0, 100, size), rng.uniform(0.5, 1.0, size)])
        hv = hypervolume_2d(front, ref)
        assert abs(hv - rectangle_union_area(front, ref)) <= 1e-12
        est, se = monte_carlo_area(front, ref, 1_000_000, rng)
        assert abs(hv - est) <= 3 * se
        if se > 0:
            z.append((hv - est) / se)
    # the per-front errors should look like standard normal draws, not a shifted or inflated cloud
    assert abs(np.mean(z)) <= 0.4 and 0.75 <= np.std(z) <= 1.25


# AC5

def test_ac5_statistics_fixtures():
    assert wilcoxon_signed_rank([2, 3, 4, 5, 6], [1, 1, 1, 1, 1]).pvalue == 0.0625
    adj, _ = holm_bonferroni([0.01, 0.04, 0.03])
    np.testing.assert_allclose(adj, [0.03, 0.06, 0.06], rtol=0, atol=1e-15)


def test_ac5_familywise_error_under_null():
    rng = np.random.default_rng(5)
    trials, alpha = 1000, 0.05
    false_alarms = 0
    for _ in range(trials):
        report = compare_against_best(rng.normal(size=(4, 3, 10)), alpha=alpha)
        false_alarms += not all(report.indistinguishable)
    rate = false_alarms / trials
    print(f"null FWER {rate:.3f}")
    assert rate <= alpha + 3 * np.sqrt(alpha * (1 - alpha) / trials)


# shared optimizer runs for AC6 and AC8

_MAX_W = {"CS1": 120, "CS2": 120, "CS3": 120, "CS4": 160}


@pytest.fixture(scope="session")
def sbi_runs():
    cache = {}

    def get(case):
        if case not in cache:
            inst = load_instance(case, _MAX_W[case])
            cache[case] = [
                run("nsga2", inst, OptimizerConfig(algorithm="nsga2", init="sbi", pop_size=200,
                                                   budget=FULL_BUDGET, seed=s))
                for s in SEEDS
            ]
        return cache[case]

    return get


# AC6

def test_ac6_cs1_strategy_mix(sbi_runs):
    fronts = [t.final_front() for t in sbi_runs("CS1")]
    props = strategy_proportions(
        np.vstack([f.strategies for f in fronts]), np.vstack([f.points for f in fronts]), scope="pareto_only")
    print("CS1/W120 pooled Pareto proportions", props)
    assert props["cold"] == 0.0 and props["warm"] == 0.0
    assert props["mixed"] >= 0.60
    assert props["mixed"] > props["hot"]


# AC7

def test_ac7_sbi_head_start_on_cs4():
    inst = load_instance("CS4", 160)
    initial = {}
    for init in ("sbi", "ri"):
        for s in SEEDS:
            cfg = OptimizerConfig(algorithm="nsga2", init=init, pop_size=200, budget=200, seed=1000 + s)
            initial[init, s] = run("nsga2", inst, cfg).checkpoints[0].points
    pooled = np.vstack([p for p in initial.values() if len(p)])
    ref = derive_reference(pooled)
    wins = sum(hypervolume_2d(initial["sbi", s], ref) > hypervolume_2d(initial["ri", s], ref) for s in SEEDS)
    print(f"SBI wins {wins}/10")
    assert wins >= 9


# AC8

def mean_hv_by_budget(traces):
    ref = derive_reference(np.vstack([t.final_front().points for t in traces]))
    budgets = [c.budget for c in traces[0].checkpoints]
    table = np.array([[hypervolume_2d(c.points, ref) for c in t.checkpoints] for t in traces])
    return dict(zip(budgets, table.mean(axis=0)))


def gap_budget(curve, tol=0.01):
    final = curve[FULL_BUDGET]
    return min(b for b, hv in curve.items() if hv >= (1 - tol) * final)


def test_ac8_convergence_budgets(sbi_runs):
    easy = {}
    for case in ("CS1", "CS2", "CS3"):
        curve = mean_hv_by_budget(sbi_runs(case))
        gap = 1 - curve[10_000] / curve[FULL_BUDGET]
        print(f"{case}: gap at 1e4 = {gap:.5f}, 1%-gap budget = {gap_budget(curve)}")
        assert gap <= 0.01
        easy[case] = gap_budget(curve)
    hard = gap_budget(mean_hv_by_budget(sbi_runs("CS4")))
    print(f"CS4: 1%-gap budget = {hard}")
    assert hard >= 5 * max(easy.values())


# AC9

def test_ac9_bench_and_reports_are_byte_identical(tmp_path):
    cfg = BenchmarkConfig.from_dict({
        "instances": [{"case": "CS2", "W": 80}, {"case": "CS3", "W": 60}],
        "algorithms": [{"algorithm": "nsga2", "pop_size": 12, "budget": 240},
                       {"algorithm": "spea2", "pop_size": 12, "budget": 240},
                       {"algorithm": "mopso", "pop_size": 12, "budget": 240}],
        "runs_per_cell": 3,
        "master_seed": 77,
    })
    trees = []
    for name in ("first", "second"):
        out = tmp_path / name
        run_benchmark(cfg, output_dir=out, workers=1)
        analyze(out)
        trees.append({p.relative_to(out).as_posix(): p.read_bytes()
                      for p in sorted(out.rglob("*")) if p.is_file() and p.parts[-2] != "timings"})
    assert trees[0] == trees[1]
    assert any(name.startswith("reports/") for name in trees[0])

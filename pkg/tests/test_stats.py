import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats as sps

from rapbench.stats import (
    InvalidInput,
    compare_against_best,
    friedman_ranks,
    holm_bonferroni,
    wilcoxon_signed_rank,
)


def test_friedman_examples():
    np.testing.assert_allclose(friedman_ranks([[3, 1], [5, 2], [9, 0]]), [1.0, 2.0])
    np.testing.assert_allclose(friedman_ranks([[5, 5, 1]]), [1.5, 1.5, 3.0])


def test_friedman_rejects_ragged_or_missing():
    with pytest.raises(InvalidInput):
        friedman_ranks([[1, 2], [3]])
    with pytest.raises(InvalidInput):
        friedman_ranks([[1, np.nan]])


@settings(max_examples=100)
@given(K=st.integers(2, 7), rows=st.integers(1, 10), seed=st.integers(0, 10_000))
def test_friedman_rank_sum(K, rows, seed):
    scores = np.random.default_rng(seed).integers(0, 4, size=(rows, K))
    assert friedman_ranks(scores).sum() == pytest.approx(K * (K + 1) / 2)


def test_wilcoxon_fixtures():
    res = wilcoxon_signed_rank([2, 3, 4, 5, 6], [1, 1, 1, 1, 1])
    assert res.pvalue == 0.0625 and res.method == "exact"
    same = wilcoxon_signed_rank([1, 2, 3], [1, 2, 3])
    assert same.pvalue == 1.0 and same.degenerate


def exact_by_enumeration(d):
    d = np.asarray(d, dtype=float)
    d = d[d != 0]
    ranks = sps.rankdata(np.abs(d))
    observed = ranks[d > 0].sum()
    center = ranks.sum() / 2
    total = extreme = 0
    for signs in itertools.product((0, 1), repeat=len(d)):
        w = ranks[np.array(signs, dtype=bool)].sum()
        total += 1
        extreme += abs(w - center) >= abs(observed - center) - 1e-9
    return extreme / total


@settings(max_examples=60, deadline=None)
@given(d=st.lists(st.integers(-5, 5), min_size=1, max_size=12))
def test_exact_pvalue_matches_sign_enumeration(d):
    x = np.array(d, dtype=float)
    res = wilcoxon_signed_rank(x, np.zeros_like(x))
    if res.degenerate:
        assert np.all(x == 0)
        return
    assert res.pvalue == pytest.approx(exact_by_enumeration(x), abs=1e-12)
    assert 0 < res.pvalue <= 1
    assert wilcoxon_signed_rank(np.zeros_like(x), x).pvalue == pytest.approx(res.pvalue, abs=1e-15)


def test_exact_matches_scipy_without_ties():
    rng = np.random.default_rng(3)
    for n in (6, 12, 20, 25):
        x, y = rng.normal(size=n), rng.normal(0.3, size=n)
        ours = wilcoxon_signed_rank(x, y).pvalue
        ref = sps.wilcoxon(x, y, method="exact").pvalue
        assert ours == pytest.approx(ref, rel=1e-10)


def test_normal_approximation_above_25():
    rng = np.random.default_rng(4)
    x, y = rng.normal(size=40), rng.normal(0.2, size=40)
    ours = wilcoxon_signed_rank(x, y)
    assert ours.method == "normal"
    ref = sps.wilcoxon(x, y, method="approx", correction=True).pvalue
    assert ours.pvalue == pytest.approx(ref, rel=1e-10)


def test_holm_fixtures():
    adj, reject = holm_bonferroni([0.01, 0.04, 0.03])
    np.testing.assert_allclose(adj, [0.03, 0.06, 0.06])
    assert reject.tolist() == [True, False, False]
    np.testing.assert_allclose(holm_bonferroni([0.04])[0], [0.04])
    adj, reject = holm_bonferroni([1.0, 1.0, 1.0])
    assert adj.tolist() == [1.0] * 3 and not reject.any()
    with pytest.raises(InvalidInput):
        holm_bonferroni([0.5, 1.2])


@settings(max_examples=100)
@given(p=st.lists(st.floats(0, 1), min_size=1, max_size=12))
def test_holm_monotone_and_dominates_raw(p):
    adj, _ = holm_bonferroni(p)
    order = np.argsort(p, kind="stable")
    assert np.all(adj >= np.asarray(p) - 1e-15)
    assert np.all(np.diff(adj[order]) >= -1e-15)
    assert np.all(adj <= 1)


def test_compare_clear_winner():
    rng = np.random.default_rng(0)
    samples = rng.normal(size=(4, 3, 10))
    samples[:, 1] += 10
    report = compare_against_best(samples, algorithms=["a", "b", "c"])
    assert report.best == "b"
    assert report.indistinguishable == (False, True, False)


def test_compare_identical_twins():
    rng = np.random.default_rng(1)
    base = rng.normal(size=(2, 10))
    samples = np.stack([base, base], axis=1)
    report = compare_against_best(samples, algorithms=["x", "y"])
    assert report.best == "x"
    assert report.p_raw[1] == 1.0 and report.indistinguishable[1]
    assert np.isnan(report.p_raw[0])


def test_compare_single_algorithm():
    report = compare_against_best(np.ones((3, 1, 5)), algorithms=["only"])
    assert report.mean_ranks == (1.0,) and report.best == "only"


def test_compare_is_label_equivariant():
    rng = np.random.default_rng(2)
    samples = rng.normal(size=(3, 4, 10)) + np.arange(4)[None, :, None] * 0.5
    names = ["a", "b", "c", "d"]
    base = compare_against_best(samples, algorithms=names)
    perm = [2, 0, 3, 1]
    permuted = compare_against_best(samples[:, perm], algorithms=[names[i] for i in perm])
    assert permuted.best == base.best
    for j, i in enumerate(perm):
        assert permuted.mean_ranks[j] == base.mean_ranks[i]
        assert permuted.indistinguishable[j] == base.indistinguishable[i]

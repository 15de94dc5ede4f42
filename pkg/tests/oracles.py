"""Independent reference implementations used only by the tests."""

from __future__ import annotations

import itertools

import numpy as np


def birth_death_hot_availability(n, k, lam, mu):
    """Product-form availability of a hot-standby k-out-of-n subsystem with per-unit repair."""
    weights = [1.0]
    for j in range(1, n - k + 2):
        i = j - 1
        weights.append(weights[-1] * (n - i) * lam / ((i + 1) * mu))
    weights = np.array(weights)
    return weights[: n - k + 1].sum() / weights.sum()


def pairwise_generator(states, params, strategy):
    """Generator built by testing every ordered pair of states against the transition rules."""
    k = params.k
    size = len(states)
    Q = np.zeros((size, size))
    sigma = params.sigma_cold if strategy == 0 else params.sigma_warm
    for i, s in enumerate(states):
        a, sb, f = s.active, s.standby, s.failed
        for j, t in enumerate(states):
            if i == j:
                continue
            d = (t.active - a, t.standby - sb, t.failed - f)
            rate = 0.0
            if strategy == 3:
                if d == (-1, 0, 1):
                    rate = a * params.lambda_working
                elif d == (1, 0, -1):
                    rate = f * params.mu
            else:
                if d == (-1, 0, 1):
                    rate = a * params.lambda_working
                elif d == (0, -1, 1) and strategy in (1, 2) and a >= k:
                    rate = sb * params.lambda_standby
                elif d == (1, -1, 0):
                    rate = min(min(sb, 2), k + 1 - a) * sigma
                elif d == (0, 1, -1):
                    rate = f * params.mu
            Q[i, j] = rate
        Q[i, i] = -Q[i].sum()
    return Q


def brute_pareto(points):
    """Nondominated points (cost down, availability up) by O(n^2) comparison, duplicates collapsed."""
    pts = [tuple(p) for p in np.asarray(points, dtype=float).reshape(-1, 2)]
    keep = []
    for p in pts:
        dominated = any(
            q[0] <= p[0] and q[1] >= p[1] and (q[0] < p[0] or q[1] > p[1]) for q in pts
        )
        if not dominated and p not in keep:
            keep.append(p)
    return sorted(keep)


def rectangle_union_area(front, ref):
    """Exact area of the union of [c, c_ref] x [a_ref, a] rectangles via coordinate compression."""
    rects = [(c, ref[0], ref[1], a) for c, a in np.asarray(front, dtype=float).reshape(-1, 2)
             if c < ref[0] and a > ref[1]]
    if not rects:
        return 0.0
    xs = sorted({r[0] for r in rects} | {r[1] for r in rects})
    ys = sorted({r[2] for r in rects} | {r[3] for r in rects})
    area = 0.0
    for x0, x1 in zip(xs, xs[1:]):
        for y0, y1 in zip(ys, ys[1:]):
            cx, cy = (x0 + x1) / 2, (y0 + y1) / 2
            if any(r[0] <= cx <= r[1] and r[2] <= cy <= r[3] for r in rects):
                area += (x1 - x0) * (y1 - y0)
    return area


def monte_carlo_area(front, ref, samples, rng):
    """Monte Carlo estimate (and its standard error) of the area dominated by ``front``."""
    pts = np.asarray(front, dtype=float).reshape(-1, 2)
    lo_c = pts[:, 0].min()
    hi_a = pts[:, 1].max()
    box = (ref[0] - lo_c) * (hi_a - ref[1])
    u = rng.uniform(lo_c, ref[0], size=samples)
    v = rng.uniform(ref[1], hi_a, size=samples)
    hit = np.zeros(samples, dtype=bool)
    for c, a in pts:
        hit |= (u >= c) & (v <= a)
    p = hit.mean()
    return box * p, box * np.sqrt(p * (1 - p) / samples)


def path_set_predicate(paths):
    """Structure function of a system that works when every member of some path works (1-based ids)."""
    def phi(x):
        return any(all(x[i - 1] for i in path) for path in paths)
    return phi


def all_vertices(m):
    return itertools.product((0, 1), repeat=m)


# Minimal path sets of the case-study networks (1-based subsystem ids).
BRIDGE_PATHS = [{1, 2}, {3, 4}, {1, 4, 5}, {2, 3, 5}]
CS2_PATHS = [{1, 2}, {3, 5}, {4, 5}]
CS6_PATHS = [
    {1, 2, 3, 4, 5, 6},
    {9, 10, 11, 12, 13, 14, 15},
    {3, 4, 5, 6, 7, 9, 10},
    {5, 6, 8, 9, 10, 11, 12},
    {1, 2, 5, 6, 7, 8, 11, 12},
    {1, 2, 3, 4, 8, 13, 14, 15},
    {1, 2, 7, 11, 12, 13, 14, 15},
    {3, 4, 7, 8, 9, 10, 13, 14, 15},
]

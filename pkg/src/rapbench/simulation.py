"""Discrete-event simulation of a single k-out-of-n standby subsystem.

Every unit carries its own exponential clock (lifetime while active or in
warm standby, repair time while failed) and up to two switchover crews move
standby units into service. Clocks of units that cannot fail are suspended
while the subsystem is down. Exponential clocks are memoryless, so a clock
is only drawn when it starts running.

The long-run availability estimate comes with a batch-means standard error.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .ctmc import InvalidConfiguration, Strategy, SubsystemParams

__all__ = ["simulate_availability"]

ACTIVE, STANDBY, FAILED = 0, 1, 2
SWITCH_CREWS = 2


@njit(cache=True)
def _exp(rate):
    return np.random.exponential(1.0 / rate)


@njit(cache=True)
def _simulate(n, k, lam_w, lam_s, sigma, mu, strategy, horizon, warmup, n_batches, seed):
    np.random.seed(seed)
    hot = strategy == 3
    standby_fails = strategy == 1 or strategy == 2
    cap = k + 1 if strategy == 2 else k

    status = np.empty(n, dtype=np.int64)
    clock = np.full(n, np.inf)
    crews = np.full(SWITCH_CREWS, np.inf)
    if hot:
        status[:] = ACTIVE
    else:
        n_active = min(n, cap)
        status[:n_active] = ACTIVE
        status[n_active:] = STANDBY

    batch_len = horizon / n_batches
    up_time = np.zeros(n_batches)
    t = 0.0
    end = warmup + horizon

    while t < end:
        a = 0
        s = 0
        for i in range(n):
            if status[i] == ACTIVE:
                a += 1
            elif status[i] == STANDBY:
                s += 1
        working = a >= k

        # start or suspend clocks to match the current state
        for i in range(n):
            if status[i] == ACTIVE:
                running = working
                rate = lam_w
            elif status[i] == STANDBY:
                running = working and standby_fails
                rate = lam_s
            else:
                running = True
                rate = mu
            if running and clock[i] == np.inf:
                clock[i] = t + _exp(rate)
            elif not running:
                clock[i] = np.inf
        n_crews = 0
        if not hot and a < cap:
            n_crews = min(s, SWITCH_CREWS, k + 1 - a)
        for c in range(SWITCH_CREWS):
            if c < n_crews:
                if crews[c] == np.inf:
                    crews[c] = t + _exp(sigma)
            else:
                crews[c] = np.inf

        nxt = np.inf
        who = -1
        for i in range(n):
            if clock[i] < nxt:
                nxt = clock[i]
                who = i
        for c in range(SWITCH_CREWS):
            if crews[c] < nxt:
                nxt = crews[c]
                who = n + c
        t_next = min(nxt, end)

        if working:
            lo = max(t, warmup)
            while lo < t_next:
                b = int((lo - warmup) / batch_len)
                if b >= n_batches:
                    break
                hi = min(t_next, warmup + (b + 1) * batch_len)
                up_time[b] += hi - lo
                lo = hi
        t = t_next
        if t >= end or who < 0:
            break

        if who < n:
            clock[who] = np.inf
            if status[who] == FAILED:
                status[who] = ACTIVE if hot else STANDBY
            else:
                status[who] = FAILED
        else:
            crews[who - n] = np.inf
            for i in range(n):
                if status[i] == STANDBY:
                    status[i] = ACTIVE
                    clock[i] = np.inf
                    break
    return up_time / batch_len


def simulate_availability(
    params: SubsystemParams,
    n: int,
    strategy,
    horizon: float = 1e6,
    seed: int = 0,
    n_batches: int = 100,
    warmup: float | None = None,
) -> tuple[float, float]:
    """Estimate long-run availability by simulation.

    Returns ``(mean, standard_error)`` from ``n_batches`` equal-length batches
    after a warm-up period (1% of the horizon unless given).
    """
    strategy = Strategy.parse(strategy)
    if n < params.k:
        raise InvalidConfiguration(f"n={n} is smaller than k={params.k}")
    if horizon <= 0 or n_batches < 2:
        raise ValueError("horizon must be positive and at least two batches are needed")
    if warmup is None:
        warmup = 0.01 * horizon
    sigma = params.sigma_cold if strategy is Strategy.COLD else params.sigma_warm
    batches = _simulate(
        int(n), int(params.k), params.lambda_working, params.lambda_standby, sigma, params.mu,
        int(strategy), float(horizon), float(warmup), int(n_batches), int(seed) % (2**32),
    )
    return float(batches.mean()), float(batches.std(ddof=1) / np.sqrt(n_batches))

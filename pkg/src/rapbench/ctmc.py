"""Markov models of repairable k-out-of-n:G subsystems.

A subsystem holds ``n`` identical components of which at least ``k`` must be
active for it to work. The state of the chain is the triple
``(active, standby, failed)``; the four redundancy strategies differ in which
triples exist and which transitions connect them.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Strategy",
    "SubsystemParams",
    "MarkovState",
    "MarkovModel",
    "InvalidConfiguration",
    "InvalidParameters",
    "NumericalFailure",
    "build_state_space",
    "build_transition_matrix",
    "build_model",
    "steady_state",
    "subsystem_availability",
]

NEGATIVE_PROBABILITY_TOL = 1e-9


class InvalidConfiguration(ValueError):
    """Raised for impossible (strategy, n, k) combinations."""


class InvalidParameters(ValueError):
    """Raised when subsystem rates violate their ordering constraints."""


class NumericalFailure(ArithmeticError):
    """Raised when the balance equations cannot be solved reliably."""


class Strategy(enum.IntEnum):
    COLD = 0
    WARM = 1
    MIXED = 2
    HOT = 3

    @classmethod
    def parse(cls, value) -> "Strategy":
        """Accept a code (0-3), a member, or a case-insensitive name."""
        if isinstance(value, str):
            text = value.strip()
            if text.isdigit():
                return cls(int(text))
            try:
                return cls[text.upper()]
            except KeyError:
                raise ValueError(f"unknown strategy {value!r}") from None
        return cls(int(value))


@dataclass(frozen=True)
class SubsystemParams:
    """Rates and unit properties of one subsystem (one Table row).

    Rates are per unit time; ``c`` and ``w`` are the per-component cost and
    weight.
    """

    k: int
    lambda_working: float
    lambda_standby: float
    sigma_cold: float
    sigma_warm: float
    mu: float
    c: float
    w: float

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise InvalidParameters(f"k must be a positive integer, got {self.k!r}")
        rates = {
            "lambda_working": self.lambda_working,
            "lambda_standby": self.lambda_standby,
            "sigma_cold": self.sigma_cold,
            "sigma_warm": self.sigma_warm,
            "mu": self.mu,
        }
        for name, value in rates.items():
            if not np.isfinite(value) or value <= 0:
                raise InvalidParameters(f"{name} must be a positive finite rate, got {value!r}")
        if not self.lambda_working > self.lambda_standby:
            raise InvalidParameters("lambda_working must exceed lambda_standby")
        if not self.sigma_warm > self.sigma_cold:
            raise InvalidParameters("sigma_warm must exceed sigma_cold")
        if self.c < 0 or self.w < 0:
            raise InvalidParameters("unit cost and weight must be non-negative")


@dataclass(frozen=True)
class MarkovState:
    active: int
    standby: int
    failed: int
    working: bool


@dataclass(frozen=True, eq=False)
class MarkovModel:
    strategy: Strategy
    n: int
    k: int
    states: tuple[MarkovState, ...]
    Q: np.ndarray

    @property
    def working_mask(self) -> np.ndarray:
        return np.array([s.working for s in self.states], dtype=bool)


def _check_nk(n: int, k: int) -> None:
    if int(n) != n or int(k) != k:
        raise InvalidConfiguration(f"n and k must be integers, got n={n!r}, k={k!r}")
    if k < 1 or n < 1:
        raise InvalidConfiguration(f"n and k must be positive, got n={n}, k={k}")
    if n < k:
        raise InvalidConfiguration(f"n={n} is smaller than k={k}")


def build_state_space(strategy, n: int, k: int) -> list[MarkovState]:
    """Enumerate the chain's states in block order.

    Blocks are: ``k+1`` active (mixed only), ``k`` active, then ``k-1`` active
    (the failure states). Within a block the standby count increases from 0.
    Hot standby keeps every functioning unit active, so its states are
    ``(n - j, 0, j)`` for ``j = 0 .. n-k+1``.
    """
    strategy = Strategy.parse(strategy)
    _check_nk(n, k)
    if strategy is Strategy.HOT:
        return [
            MarkovState(n - j, 0, j, n - j >= k)
            for j in range(n - k + 2)
        ]

    n_top = n - k if strategy is Strategy.MIXED else 0
    states = [MarkovState(k + 1, j, n - k - j - 1, True) for j in range(n_top)]
    states += [MarkovState(k, j, n - k - j, True) for j in range(n - k + 1)]
    states += [MarkovState(k - 1, j, n - k - j + 1, False) for j in range(n - k + 2)]
    return states


def build_transition_matrix(states, params: SubsystemParams, strategy) -> np.ndarray:
    """Generator matrix over ``states`` (rows sum to zero)."""
    strategy = Strategy.parse(strategy)
    k = params.k
    index = {(s.active, s.standby, s.failed): i for i, s in enumerate(states)}
    size = len(states)
    Q = np.zeros((size, size))

    def add(i, target, rate):
        j = index.get(target)
        if j is not None and rate > 0:
            Q[i, j] += rate

    if strategy is Strategy.HOT:
        for i, s in enumerate(states):
            add(i, (s.active - 1, 0, s.failed + 1), s.active * params.lambda_working)
            add(i, (s.active + 1, 0, s.failed - 1), s.failed * params.mu)
    else:
        sigma = params.sigma_cold if strategy is Strategy.COLD else params.sigma_warm
        standby_fails = strategy in (Strategy.WARM, Strategy.MIXED)
        for i, s in enumerate(states):
            a, sb, f = s.active, s.standby, s.failed
            add(i, (a - 1, sb, f + 1), a * params.lambda_working)
            if standby_fails and a != k - 1:
                add(i, (a, sb - 1, f + 1), sb * params.lambda_standby)
            add(i, (a + 1, sb - 1, f), min(sb, 2, k + 1 - a) * sigma)
            add(i, (a, sb + 1, f - 1), f * params.mu)

    Q[np.diag_indices(size)] = -Q.sum(axis=1)
    return Q


def build_model(params: SubsystemParams, n: int, strategy) -> MarkovModel:
    strategy = Strategy.parse(strategy)
    states = build_state_space(strategy, n, params.k)
    Q = build_transition_matrix(states, params, strategy)
    return MarkovModel(strategy, n, params.k, tuple(states), Q)


def steady_state(Q) -> np.ndarray:
    """Stationary distribution of an irreducible generator ``Q``.

    The last balance equation is replaced by the normalisation row and the
    resulting dense system is solved directly.
    """
    Q = np.asarray(Q, dtype=float)
    if Q.ndim != 2 or Q.shape[0] != Q.shape[1] or Q.shape[0] == 0:
        raise NumericalFailure(f"generator must be a non-empty square matrix, got shape {Q.shape}")
    size = Q.shape[0]
    A = Q.T.copy()
    A[-1, :] = 1.0
    b = np.zeros(size)
    b[-1] = 1.0
    try:
        pi = np.linalg.solve(A, b)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"balance equations are singular: {exc}") from exc
    if not np.all(np.isfinite(pi)):
        raise NumericalFailure("steady-state solve produced non-finite values")
    if pi.min() < -NEGATIVE_PROBABILITY_TOL:
        raise NumericalFailure(
            f"steady-state solve produced probability {pi.min():.3e}; chain is likely reducible"
        )
    pi = np.clip(pi, 0.0, None)
    return pi / pi.sum()


@functools.lru_cache(maxsize=None)
def _cached_availability(params: SubsystemParams, n: int, strategy: Strategy) -> float:
    model = build_model(params, n, strategy)
    pi = steady_state(model.Q)
    return float(pi[model.working_mask].sum())


def subsystem_availability(params: SubsystemParams, n: int, strategy) -> float:
    """Long-run probability that at least ``k`` of the ``n`` units are active.

    Results are memoised per process; the function is pure so the cache never
    changes a value.
    """
    strategy = Strategy.parse(strategy)
    _check_nk(n, params.k)
    return _cached_availability(params, int(n), strategy)

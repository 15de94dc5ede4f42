import pytest

from rapbench.ctmc import InvalidConfiguration, Strategy, subsystem_availability
from rapbench.rap import load_instance
from rapbench.simulation import simulate_availability


@pytest.fixture(scope="module")
def params():
    return load_instance("CS1", 60).subsystems[0]


@pytest.mark.parametrize("strategy", list(Strategy))
def test_simulation_agrees_with_chain(params, strategy):
    n = params.k + 2
    mean, se = simulate_availability(params, n, strategy, horizon=2e5, seed=4)
    exact = subsystem_availability(params, n, strategy)
    assert se > 0
    assert abs(mean - exact) <= 4 * se


def test_same_seed_same_estimate(params):
    a = simulate_availability(params, params.k + 1, "warm", horizon=5e4, seed=7)
    b = simulate_availability(params, params.k + 1, "warm", horizon=5e4, seed=7)
    assert a == b
    assert a != simulate_availability(params, params.k + 1, "warm", horizon=5e4, seed=8)


def test_invalid_inputs(params):
    with pytest.raises(InvalidConfiguration):
        simulate_availability(params, params.k - 1, "hot")
    with pytest.raises(ValueError):
        simulate_availability(params, params.k, "hot", horizon=0)
    with pytest.raises(ValueError):
        simulate_availability(params, params.k, "hot", n_batches=1)

import math

import numpy as np
import pytest

from hminus_vqe.hminus import HamiltonianSpec, build_hamiltonian
from hminus_vqe.optimizers import (
    METHODS,
    Objective,
    OptimizerConfig,
    OptimizerError,
    minimize,
    nelder_mead,
    powell,
    spsa,
)
from hminus_vqe.vqe import AnsatzConfig, energy_function

H_PHYS = build_hamiltonian(HamiltonianSpec.make())
ANSATZ = AnsatzConfig()


def quadratic(x):
    return float(np.sum((x - 1.0) ** 2))


def check_trace(trace):
    its = [r.iteration for r in trace.records]
    assert its == list(range(1, len(its) + 1))
    e = trace.energies
    assert all(b <= a for a, b in zip(e, e[1:]))
    assert trace.terminal_reason in {"converged_f", "converged_x", "max_iterations"}


# --- Nelder-Mead ---------------------------------------------------------------


def test_nm_quadratic():
    obj = Objective(quadratic)
    trace = nelder_mead(obj, np.zeros(12), OptimizerConfig(max_iterations=2000))
    assert trace.best_energy < 1e-8
    assert len(trace) <= 2000
    check_trace(trace)
    assert obj.evaluation_count <= 13 + 4 * len(trace) + 12 * len(trace)


def test_nm_constant_objective():
    trace = nelder_mead(Objective(lambda x: 3.0), np.zeros(4), OptimizerConfig())
    assert len(trace) == 1
    assert trace.terminal_reason == "converged_f"


def test_nm_budget_without_shrinks():
    # a smooth bowl seldom shrinks; the n+1+4k bound holds there
    obj = Objective(lambda x: float(np.sum(x**2 * np.arange(1, 5))))
    trace = nelder_mead(obj, np.ones(4), OptimizerConfig(max_iterations=200))
    assert obj.evaluation_count <= 5 + 4 * len(trace)
    assert trace.evaluations == obj.evaluation_count


def test_nm_vqe_restarts():
    rng = np.random.default_rng(3)
    best = math.inf
    for _ in range(20):
        obj = Objective(energy_function(H_PHYS, ANSATZ))
        trace = nelder_mead(obj, rng.uniform(0, 2 * np.pi, 12), OptimizerConfig())
        check_trace(trace)
        assert obj.evaluation_count <= 13 + 4 * len(trace) + 12 * len(trace)
        best = min(best, trace.best_energy)
    assert abs(best + 0.6875) < 1e-6


# --- Powell ---------------------------------------------------------------


def test_powell_quadratic():
    trace = powell(Objective(quadratic), np.zeros(12), OptimizerConfig("powell", max_iterations=50))
    assert trace.best_energy < 1e-8
    check_trace(trace)


def test_powell_quadratic_coupled():
    a = np.array([[3.0, 1.0, 0.0], [1.0, 2.0, 0.5], [0.0, 0.5, 1.0]])
    f = lambda x: float((x - 2) @ a @ (x - 2))
    trace = powell(Objective(f), np.zeros(3), OptimizerConfig("powell", max_iterations=50))
    assert trace.best_energy < 1e-10
    np.testing.assert_allclose(trace.best_params, 2.0, atol=1e-4)


def test_powell_separable_cosine():
    trace = powell(
        Objective(lambda x: float(np.sum(np.cos(x)))),
        np.full(12, np.pi / 2),
        OptimizerConfig("powell"),
    )
    assert abs(trace.best_energy + 12) < 1e-6
    np.testing.assert_allclose(np.mod(trace.best_params, 2 * np.pi), np.pi, atol=1e-3)


def test_powell_vqe_restarts():
    rng = np.random.default_rng(4)
    best = min(
        powell(
            Objective(energy_function(H_PHYS, ANSATZ)),
            rng.uniform(0, 2 * np.pi, 12),
            OptimizerConfig("powell"),
        ).best_energy
        for _ in range(20)
    )
    assert abs(best + 0.6875) < 1e-6


# --- SPSA ---------------------------------------------------------------


def test_spsa_quadratic_mean_over_seeds():
    finals = []
    for seed in range(10):
        obj = Objective(quadratic)
        trace = spsa(obj, np.zeros(12), OptimizerConfig("spsa", max_iterations=500, seed=seed))
        assert obj.evaluation_count == 2 * 500 + 1
        check_trace(trace)
        finals.append(quadratic(trace.best_params))
    assert np.mean(finals) < 1e-3


def test_spsa_zero_gain_constant_incumbent():
    x0 = np.linspace(0, 1, 6)
    trace = spsa(Objective(quadratic), x0, OptimizerConfig("spsa", max_iterations=30, spsa_a=0.0))
    for r in trace.records:
        np.testing.assert_array_equal(r.params, x0)


def test_spsa_shift_mode_runs():
    obj = Objective(energy_function(H_PHYS, ANSATZ))
    cfg = OptimizerConfig("spsa", max_iterations=300, spsa_shift=True, spsa_a=0.5, seed=1)
    trace = spsa(obj, np.full(12, 0.3), cfg)
    assert obj.evaluation_count == 601
    check_trace(trace)
    assert trace.best_energy < 0.0


@pytest.mark.slow
def test_spsa_vqe_with_shots():
    exact = energy_function(H_PHYS, ANSATZ)
    finals = []
    for seed in range(10):
        rng = np.random.default_rng(100 + seed)
        obj = Objective(energy_function(H_PHYS, ANSATZ, shots=8192, seed=seed))
        cfg = OptimizerConfig("spsa", max_iterations=6000, seed=seed)
        trace = spsa(obj, rng.uniform(0, 2 * np.pi, 12), cfg)
        finals.append(exact(trace.best_params))
    assert abs(np.median(finals) + 0.6875) < 0.05


# --- shared contract --------------------------------------------------------


@pytest.mark.parametrize("method", METHODS)
def test_deterministic(method):
    def run():
        obj = Objective(energy_function(H_PHYS, ANSATZ, shots=512, seed=9))
        cfg = OptimizerConfig(method, max_iterations=40, seed=2)
        return minimize(obj, np.full(12, 0.7), cfg)

    a, b = run(), run()
    assert a.energies == b.energies
    assert a.terminal_reason == b.terminal_reason
    for ra, rb in zip(a.records, b.records):
        np.testing.assert_array_equal(ra.params, rb.params)


@pytest.mark.parametrize("method", METHODS)
def test_non_finite_objective_raises(method):
    calls = iter(range(10**6))

    def f(x):
        return math.nan if next(calls) == 5 else float(np.sum(x**2))

    with pytest.raises(OptimizerError):
        minimize(Objective(f), np.ones(3), OptimizerConfig(method, max_iterations=100))


@pytest.mark.parametrize("method", METHODS)
def test_monotone_on_noisy_objective(method):
    obj = Objective(energy_function(H_PHYS, ANSATZ, shots=256, seed=1))
    check_trace(minimize(obj, np.full(12, 1.0), OptimizerConfig(method, max_iterations=60)))


def test_config_validation():
    with pytest.raises(ValueError):
        OptimizerConfig("cobyla")
    with pytest.raises(ValueError):
        OptimizerConfig(max_iterations=0)
    with pytest.raises(ValueError):
        OptimizerConfig(f_tolerance=0.0)
    with pytest.raises(ValueError):
        OptimizerConfig(x_tolerance=-1.0)


def test_non_finite_start_rejected():
    with pytest.raises(ValueError):
        nelder_mead(Objective(quadratic), [np.inf, 0.0], OptimizerConfig())

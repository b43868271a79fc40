import numpy as np
import pytest

from networkmodel.domain.model.value_objects.ReferenceSignal import ReferenceSignal
from mpc.application.internal.ocpservice.OcpBuilderImpl import OcpBuilderImpl
from mpc.application.internal.simulationservice.SimulationServiceImpl import (
    SimulationServiceImpl,
    closed_loop_cost,
    replay,
)
from mpc.domain.model.commands.SimulateCommand import SimulateCommand
from mpc.domain.model.exceptions.MpcErrors import InfeasibleAtStepError
from mpc.domain.model.value_objects.OcpVariant import OcpVariant
from mpc.domain.model.value_objects.SolverMode import AdmmBudget, AdmmSettings, SolverMode
from mpc.domain.services.TargetSampler import (
    equilibrium_directions,
    sample_initial_states,
    sample_target,
    state_admissible,
)


@pytest.fixture(scope="module")
def simulation(solver):
    return SimulationServiceImpl(OcpBuilderImpl(solver), solver, jobs=1)


def test_holding_the_reference_equilibrium_costs_nothing(simulation, scalar_network, scalar_ingredients):
    report = simulation.simulate(scalar_network, scalar_ingredients, OcpVariant.DST, [1.0], [1.0], T_sim=4)
    assert report.completed
    assert report.closed_loop_cost == pytest.approx(0.0, abs=1e-6)
    assert report.tracking_error == pytest.approx(0.0, abs=1e-5)
    for u in report.inputs:
        np.testing.assert_allclose(u, [-0.1], atol=1e-5)


def test_recorded_inputs_replay_to_the_recorded_states(simulation, pair_network, pair_ingredients):
    report = simulation.simulate(pair_network, pair_ingredients, OcpVariant.DST, [0.5, -0.5], [0.3, 0.3], T_sim=5)
    states = replay(pair_network, report.states[0], report.inputs)
    assert len(states) == len(report.states) == 6
    for expected, actual in zip(states, report.states):
        np.testing.assert_allclose(actual, expected, atol=1e-12)


def test_closed_loop_moves_towards_the_target(simulation, scalar_network, scalar_ingredients):
    report = simulation.simulate(scalar_network, scalar_ingredients, OcpVariant.DST, [0.0], [1.0], T_sim=12)
    assert report.completed
    assert report.tracking_error < 0.5
    assert len(report.steps) == 12
    assert all(step.alphas[1] >= 0 for step in report.steps)


def test_closed_loop_cost_counts_the_final_state(scalar_network):
    reference = ReferenceSignal.constant([0.0])
    cost = closed_loop_cost(scalar_network, [np.array([1.0]), np.array([2.0])], [np.array([0.5])], reference)
    assert cost == pytest.approx((1.0 + 0.25) + (4.0 + 0.25))


def test_infeasible_step_halts_the_run(simulation, scalar_network, scalar_ingredients):
    report = simulation.simulate(scalar_network, scalar_ingredients, OcpVariant.DST, [6.0], [0.0], T_sim=5)
    assert report.infeasible_at == 0
    assert report.closed_loop_cost is None
    assert len(report.steps) == 1 and not report.steps[0].feasible
    with pytest.raises(InfeasibleAtStepError) as error:
        report.raise_for_status()
    assert error.value.step == 0


def test_piecewise_reference_switches_target(simulation, scalar_network, scalar_ingredients):
    reference = ReferenceSignal.from_pairs([(0, [1.0]), (3, [0.5])])
    command = SimulateCommand(
        variant=OcpVariant.DST_DD, x_init=(1.0,), reference=reference, T_sim=5,
    )
    report = simulation.execute(command, scalar_network, scalar_ingredients)
    np.testing.assert_array_equal(report.steps[2].x_r, [1.0])
    np.testing.assert_array_equal(report.steps[3].x_r, [0.5])


def test_regulation_baseline_returns_to_the_origin(simulation, scalar_network, scalar_ingredients):
    report = simulation.simulate(scalar_network, scalar_ingredients, OcpVariant.APP, [0.5], [0.0], T_sim=10)
    assert report.completed
    assert abs(report.states[-1][0]) < abs(report.states[0][0])


def test_admm_run_records_iteration_history(simulation, pair_network, pair_ingredients):
    mode = SolverMode.consensus(AdmmSettings(rho=1.0, budget=AdmmBudget(max_iters=5)))
    report = simulation.simulate(pair_network, pair_ingredients, OcpVariant.DST_DD, [0.5, -0.5], [0.3, 0.3], 3, mode)
    assert report.solver_mode == "admm"
    assert report.budget_mode == "max_iters"
    assert report.iteration_counts == [5, 5, 5]
    assert all(len(step.admm_history) == 5 for step in report.steps)


def test_suboptimality_against_a_reference_run(simulation, scalar_network, scalar_ingredients):
    report = simulation.simulate(scalar_network, scalar_ingredients, OcpVariant.DST, [0.0], [1.0], T_sim=3)
    assert report.with_suboptimality(report.closed_loop_cost).suboptimality == pytest.approx(0.0)
    assert report.with_suboptimality(0.0).suboptimality is None


def test_horizon_of_the_run_must_be_positive(simulation, scalar_network, scalar_ingredients):
    with pytest.raises(ValueError):
        simulation.simulate(scalar_network, scalar_ingredients, OcpVariant.DST, [0.0], [0.0], T_sim=0)


@pytest.mark.slow
@pytest.mark.parametrize("variant", [OcpVariant.DST, OcpVariant.DST_DD])
def test_benchmark_closed_loop_approaches_a_sampled_target(simulation, benchmark_network,
                                                           benchmark_ingredients, variant):
    x_r, _ = sample_target(benchmark_network, np.random.default_rng(7))
    report = simulation.simulate(
        benchmark_network, benchmark_ingredients, variant, np.zeros(benchmark_network.n_total), x_r, T_sim=10,
    )
    assert report.completed
    assert report.tracking_error < np.max(np.abs(x_r))


# =========================================================================
# TARGETS AND INITIAL STATES
# =========================================================================

def test_sampled_targets_are_admissible_equilibria(pair_network):
    rng = np.random.default_rng(7)
    A, B = pair_network.global_dynamics
    for _ in range(5):
        x_r, u_r = sample_target(pair_network, rng)
        np.testing.assert_allclose(A @ x_r + B @ u_r, x_r, atol=1e-10)
        assert state_admissible(pair_network, x_r)
        assert np.all(np.abs(u_r) <= 0.8 * 2.0 + 1e-9)


def test_equilibrium_directions_span_the_inputs(pair_network):
    assert equilibrium_directions(pair_network).shape == (4, 2)


def test_initial_states_stay_in_the_box(pair_network):
    samples = sample_initial_states(pair_network, 20, np.random.default_rng(1), radius=0.3)
    assert len(samples) == 20
    assert all(np.max(np.abs(x)) <= 0.3 for x in samples)

import numpy as np
import pytest

from networkmodel.domain.model.exceptions.NetworkErrors import DimensionError
from optimization.domain.model.value_objects.ConeKind import ConeKind
from optimization.domain.model.value_objects.SolveOptions import SolveOptions
from optimization.domain.model.value_objects.SolveStatus import SolveStatus
from optimization.infrastructure.solvers.CvxpySolverAdapter import CvxpySolverAdapter
from mpc.application.internal.ocpservice.OcpBuilderImpl import OcpBuilderImpl
from mpc.domain.model.exceptions.MpcErrors import IngredientMismatchError, NoIncumbentError
from mpc.domain.model.value_objects.OcpVariant import OcpVariant
from mpc.domain.services.TargetSampler import sample_target
from terminal.domain.services.InvarianceConstraints import dd_feasible
from terminal.domain.services.InvarianceVerifier import invariance_check_montecarlo

PAIR_START = np.array([1.0, -0.5])
PAIR_TARGET = np.array([0.5, 0.5])


@pytest.fixture(scope="module")
def builder(solver):
    return OcpBuilderImpl(solver)


def solve(builder, variant, model, ingredients, x_init, x_r=None):
    instance = builder.build(variant, model, ingredients, x_init, x_r)
    return instance, builder.extract_solution(builder.solve_central(instance), instance)


def test_starting_at_the_reference_equilibrium_costs_nothing(builder, scalar_network, scalar_ingredients):
    _, solution = solve(builder, OcpVariant.DST, scalar_network, scalar_ingredients, [1.0], [1.0])
    assert solution.status is SolveStatus.OPTIMAL
    assert solution.objective == pytest.approx(0.0, abs=1e-6)
    np.testing.assert_allclose(solution.first_input(scalar_network), [-0.1], atol=1e-5)
    np.testing.assert_allclose(solution.of(1).xe, [1.0], atol=1e-5)


def test_regulation_from_the_origin_costs_nothing(builder, scalar_network, scalar_ingredients):
    _, solution = solve(builder, OcpVariant.APP, scalar_network, scalar_ingredients, [0.0])
    assert solution.objective == pytest.approx(0.0, abs=1e-6)


def test_diagonal_dominance_never_beats_the_lmi(builder, pair_network, pair_ingredients):
    _, dst = solve(builder, OcpVariant.DST, pair_network, pair_ingredients, PAIR_START, PAIR_TARGET)
    _, dd = solve(builder, OcpVariant.DST_DD, pair_network, pair_ingredients, PAIR_START, PAIR_TARGET)
    assert dst.objective <= dd.objective + 1e-6
    assert dst.objective > 0


def test_solution_satisfies_the_dynamics(builder, pair_network, pair_ingredients):
    _, solution = solve(builder, OcpVariant.DST, pair_network, pair_ingredients, PAIR_START, PAIR_TARGET)
    assert solution.dynamics_residual < 1e-6
    np.testing.assert_allclose(solution.of(1).x[0], PAIR_START[:1], atol=1e-7)
    assert solution.of(2).u.shape == (pair_network.T, 1)


def test_dst_dd_has_no_psd_cone(builder, pair_network, pair_ingredients):
    dd = builder.build(OcpVariant.DST_DD, pair_network, pair_ingredients, PAIR_START, PAIR_TARGET)
    dst = builder.build(OcpVariant.DST, pair_network, pair_ingredients, PAIR_START, PAIR_TARGET)
    assert dd.program.cones(ConeKind.PSD) == []
    assert len(dst.program.cones(ConeKind.PSD)) == pair_network.M


def test_online_terminal_sets_are_invariant(builder, pair_network, pair_ingredients):
    instance, solution = solve(builder, OcpVariant.DST, pair_network, pair_ingredients, PAIR_START, PAIR_TARGET)
    params = solution.terminal_params()
    rng = np.random.default_rng(11)
    for i in pair_network.ids:
        assert invariance_check_montecarlo(instance.geometries[i], params, 300, rng).holds()


def test_diagonal_dominance_rows_certify_invariance(builder, pair_network, pair_ingredients):
    instance, solution = solve(builder, OcpVariant.DST_DD, pair_network, pair_ingredients, PAIR_START, PAIR_TARGET)
    params = solution.terminal_params()
    rng = np.random.default_rng(12)
    for i in pair_network.ids:
        assert dd_feasible(instance.geometries[i], params, tol=1e-6)
        assert invariance_check_montecarlo(instance.geometries[i], params, 300, rng).holds()


def test_instance_is_reused_with_new_data(builder, scalar_network, scalar_ingredients):
    instance = builder.build(OcpVariant.DST, scalar_network, scalar_ingredients, [0.0], [0.0])
    instance.set_initial_state([1.0])
    instance.set_reference([1.0])
    solution = builder.extract_solution(builder.solve_central(instance), instance)
    assert solution.objective == pytest.approx(0.0, abs=1e-6)
    np.testing.assert_array_equal(instance.reference, [1.0])


def test_regulation_baseline_rejects_a_reference(builder, scalar_network, scalar_ingredients):
    instance = builder.build(OcpVariant.APP, scalar_network, scalar_ingredients, [0.0])
    with pytest.raises(DimensionError):
        instance.set_reference([1.0])


def test_foreign_ingredients_are_rejected(builder, pair_network, scalar_ingredients):
    with pytest.raises(IngredientMismatchError):
        builder.build(OcpVariant.DST, pair_network, scalar_ingredients, PAIR_START, PAIR_TARGET)


def test_infeasible_start_has_no_incumbent(builder, scalar_network, scalar_ingredients):
    instance = builder.build(OcpVariant.DST, scalar_network, scalar_ingredients, [6.0], [0.0])
    result = builder.solve_central(instance)
    assert result.status is SolveStatus.INFEASIBLE
    with pytest.raises(NoIncumbentError):
        builder.extract_solution(result, instance)


# default backend settings on the benchmark

@pytest.fixture(scope="module")
def default_builder():
    return OcpBuilderImpl(CvxpySolverAdapter(SolveOptions()))


@pytest.mark.slow
@pytest.mark.parametrize("variant", list(OcpVariant))
def test_benchmark_at_rest_costs_nothing_with_default_settings(default_builder, benchmark_network,
                                                                benchmark_ingredients, variant):
    origin = np.zeros(benchmark_network.n_total)
    reference = None if variant is OcpVariant.APP else origin
    instance = default_builder.build(variant, benchmark_network, benchmark_ingredients, origin, reference)
    result = default_builder.solve_central(instance)
    assert result.status is SolveStatus.OPTIMAL
    solution = default_builder.extract_solution(result, instance)
    assert solution.objective == pytest.approx(0.0, abs=1e-4)


@pytest.mark.slow
@pytest.mark.parametrize("variant", [OcpVariant.DST, OcpVariant.DST_DD])
@pytest.mark.parametrize("seed", [1, 2, 3])
def test_benchmark_targets_solve_with_default_settings(default_builder, benchmark_network,
                                                       benchmark_ingredients, variant, seed):
    x_r, _ = sample_target(benchmark_network, np.random.default_rng(seed))
    origin = np.zeros(benchmark_network.n_total)
    instance = default_builder.build(variant, benchmark_network, benchmark_ingredients, origin, x_r)
    result = default_builder.solve_central(instance)
    assert result.status is SolveStatus.OPTIMAL
    solution = default_builder.extract_solution(result, instance)
    assert solution.dynamics_residual <= 1e-6 * (1.0 + np.max(np.abs(x_r)))
    assert solution.objective > 0

import numpy as np
import pytest

from networkmodel.domain.model.aggregates.NetworkModel import NetworkModel, SubsystemModel
from optimization.domain.services.PsdCheck import check_psd, is_diagonally_dominant
from terminal.domain.model.aggregates.TerminalIngredients import SubsystemIngredients, TerminalIngredients
from terminal.domain.model.value_objects.TerminalSetParams import SubsystemTerminalParams, TerminalSetParams
from terminal.domain.services.InvarianceConstraints import (
    TerminalSymbols,
    dd_feasible,
    input_support_constraint,
    invariance_matrix,
    state_support_constraint,
)
from terminal.domain.services.InvarianceVerifier import (
    invariance_check_montecarlo,
    sampled_input_support,
    sampled_state_support,
)
from terminal.domain.services.TerminalGeometry import TerminalGeometry
from tests.conftest import build_pair_network, build_scalar_network, scalar_subsystem

CENTER = np.array([0.1, -0.2])
OFFSET = np.array([0.05])
N_SAMPLES = 100_000


def ingredients_of(*gains, P=None) -> TerminalIngredients:
    return TerminalIngredients(subsystems=tuple(
        SubsystemIngredients(id=i, P=[[1.0]] if P is None else P, K=K) for i, K in enumerate(gains, start=1)
    ))


def params_of(alpha: float, c=CENTER, d=OFFSET, **kwargs) -> TerminalSetParams:
    return TerminalSetParams({1: SubsystemTerminalParams(alpha=alpha, c=c, d=d, **kwargs)})


def value(expression) -> float:
    return float(np.asarray(expression.value).reshape(-1)[0])


@pytest.fixture(scope="module")
def planar_geometry() -> TerminalGeometry:
    """One 2-state subsystem with a non-diagonal P"""
    subsystem = SubsystemModel(
        id=1,
        A=[[0.9, 0.1], [0.0, 0.8]],
        B=[[0.0], [1.0]],
        G=[[1.0, 0.0], [0.0, 1.0], [-1.0, -1.0]],
        g=[1.0, 1.0, 1.5],
        Hc=[[1.0], [-1.0]],
        hc=[0.5, 0.5],
        Q=np.eye(2),
        R=[[1.0]],
        S=np.eye(2),
    )
    network = NetworkModel(subsystems=(subsystem,), neighbor_sets=((1,),), horizon=1)
    ingredients = ingredients_of([[-0.3, -0.2]], P=[[2.0, 0.5], [0.5, 1.0]])
    return TerminalGeometry.build(network, ingredients, 1)


# =========================================================================
# SUPPORT FUNCTIONS
# =========================================================================

def tight_state_radius(geometry, k: int) -> float:
    return (geometry.g[k] - geometry.G[k] @ CENTER) / geometry.state_norms[k, 0]


def tight_input_radius(geometry, l: int) -> float:
    slack = geometry.hc[l] - geometry.HcK[l] @ CENTER - geometry.Hc[l] @ OFFSET
    return slack / geometry.input_norms[l, 0]


@pytest.mark.parametrize("k", [0, 1, 2])
def test_state_row_is_tight_at_the_sampled_maximum(planar_geometry, k):
    params = params_of(tight_state_radius(planar_geometry, k))
    symbols = TerminalSymbols.constant(planar_geometry, params)
    assert value(state_support_constraint(planar_geometry, symbols, k)) == pytest.approx(0.0, abs=1e-12)
    sampled = sampled_state_support(planar_geometry, params, k, N_SAMPLES, np.random.default_rng(k))
    assert planar_geometry.g[k] - 1e-3 <= sampled <= planar_geometry.g[k] + 1e-9


@pytest.mark.parametrize("k", [0, 1, 2])
def test_state_row_sign_follows_the_sampled_maximum(planar_geometry, k):
    alpha = tight_state_radius(planar_geometry, k)
    rng = np.random.default_rng(10 + k)

    inside = params_of(0.5 * alpha)
    symbols = TerminalSymbols.constant(planar_geometry, inside)
    assert value(state_support_constraint(planar_geometry, symbols, k)) < 0
    assert sampled_state_support(planar_geometry, inside, k, N_SAMPLES, rng) < planar_geometry.g[k]

    outside = params_of(1.5 * alpha)
    symbols = TerminalSymbols.constant(planar_geometry, outside)
    assert value(state_support_constraint(planar_geometry, symbols, k)) > 0
    assert sampled_state_support(planar_geometry, outside, k, N_SAMPLES, rng) > planar_geometry.g[k]
    assert invariance_check_montecarlo(planar_geometry, outside, 2000, rng).state_residual > 0


@pytest.mark.parametrize("l", [0, 1])
def test_input_row_is_tight_at_the_sampled_maximum(planar_geometry, l):
    params = params_of(tight_input_radius(planar_geometry, l))
    symbols = TerminalSymbols.constant(planar_geometry, params)
    assert value(input_support_constraint(planar_geometry, symbols, l)) == pytest.approx(0.0, abs=1e-12)
    sampled = sampled_input_support(planar_geometry, params, l, N_SAMPLES, np.random.default_rng(20 + l))
    assert planar_geometry.hc[l] - 1e-3 <= sampled <= planar_geometry.hc[l] + 1e-9


@pytest.mark.parametrize("l", [0, 1])
def test_input_row_sign_follows_the_sampled_maximum(planar_geometry, l):
    alpha = tight_input_radius(planar_geometry, l)
    rng = np.random.default_rng(30 + l)

    inside = params_of(0.5 * alpha)
    symbols = TerminalSymbols.constant(planar_geometry, inside)
    assert value(input_support_constraint(planar_geometry, symbols, l)) < 0
    assert sampled_input_support(planar_geometry, inside, l, N_SAMPLES, rng) < planar_geometry.hc[l]

    outside = params_of(1.5 * alpha)
    symbols = TerminalSymbols.constant(planar_geometry, outside)
    assert value(input_support_constraint(planar_geometry, symbols, l)) > 0
    assert sampled_input_support(planar_geometry, outside, l, N_SAMPLES, rng) > planar_geometry.hc[l]
    assert invariance_check_montecarlo(planar_geometry, outside, 2000, rng).input_residual > 0


def test_scalar_support_rows():
    network = NetworkModel(
        subsystems=(scalar_subsystem(1, [[1.1]], [[1.0], [-1.0]], g=(0.6, 0.6), hc=(0.6, 0.6)),),
        neighbor_sets=((1,),),
        horizon=1,
    )
    geometry = TerminalGeometry.build(network, ingredients_of([[0.5]]), 1)

    symbols = TerminalSymbols.constant(geometry, params_of(0.5, c=[0.0], d=[0.0]))
    assert value(state_support_constraint(geometry, symbols, 0)) == pytest.approx(-0.1)

    symbols = TerminalSymbols.constant(geometry, params_of(1.0, c=[0.0], d=[0.0]))
    assert value(input_support_constraint(geometry, symbols, 0)) == pytest.approx(-0.1)


# =========================================================================
# INVARIANCE MATRIX AND DIAGONAL DOMINANCE
# =========================================================================

@pytest.fixture(scope="module")
def unit_geometry() -> TerminalGeometry:
    """x+ = x + u with P = 1 and K = -0.5, so A + BK = 0.5"""
    return TerminalGeometry.build(build_scalar_network(a=1.0), ingredients_of([[-0.5]]), 1)


def test_invariance_matrix_at_fixed_parameters(unit_geometry):
    params = params_of(1.0, c=[0.0], d=[0.0], lam={1: 0.25}, b=[0.0])
    np.testing.assert_allclose(
        invariance_matrix(unit_geometry, params),
        [[1.0, 0.5, 0.0], [0.5, 0.25, 0.0], [0.0, 0.0, 0.75]],
        atol=1e-12,
    )


def test_psd_matrix_need_not_be_diagonally_dominant(unit_geometry):
    params = params_of(1.0, c=[0.0], d=[0.0], lam={1: 0.25}, b=[0.0])
    assert check_psd(invariance_matrix(unit_geometry, params)).is_psd
    assert not dd_feasible(unit_geometry, params)


def test_large_multiplier_breaks_the_lmi(unit_geometry):
    params = params_of(1.0, c=[0.0], d=[0.0], lam={1: 1.25}, b=[0.0])
    report = check_psd(invariance_matrix(unit_geometry, params))
    assert not report.is_psd
    assert report.min_eigenvalue == pytest.approx(-0.25, abs=1e-9)


def test_center_error_enters_the_last_column(unit_geometry):
    params = params_of(1.0, c=[0.0], d=[0.2], lam={1: 0.5}, b=[0.2])
    matrix = invariance_matrix(unit_geometry, params)
    assert matrix[0, 2] == pytest.approx(0.2)
    assert matrix[2, 0] == pytest.approx(0.2)
    assert dd_feasible(unit_geometry, params)
    assert not dd_feasible(unit_geometry, params_of(1.0, c=[0.0], d=[0.3], lam={1: 0.5}, b=[0.2]))


def test_diagonal_dominance_rows_imply_the_lmi():
    network = build_pair_network()
    ingredients = ingredients_of([[-0.6, -0.1]], [[-0.1, -0.5]])
    geometries = {i: TerminalGeometry.build(network, ingredients, i) for i in network.ids}
    rng = np.random.default_rng(2024)

    accepted = 0
    for _ in range(1000):
        alpha = rng.uniform(0.1, 2.0, size=2)
        subsystems = {}
        for i, geometry in geometries.items():
            columns = geometry.A_K_abs.sum(axis=0)
            lam = {j: float(columns[k] * alpha[k] * rng.uniform(1.0, 1.5)) for k, j in enumerate(geometry.neighbors)}
            b = rng.uniform(0.0, 0.3) * alpha[i - 1]
            # c = 0, so the center error is B d = d
            subsystems[i] = SubsystemTerminalParams(
                alpha=float(alpha[i - 1]), c=[0.0], d=[rng.uniform(-1.0, 1.0) * b], lam=lam, b=[b],
            )
        params = TerminalSetParams(subsystems)
        for geometry in geometries.values():
            if not dd_feasible(geometry, params):
                continue
            accepted += 1
            matrix = invariance_matrix(geometry, params)
            assert is_diagonally_dominant(matrix, tol=1e-9)
            assert check_psd(matrix).is_psd
    assert accepted >= 100

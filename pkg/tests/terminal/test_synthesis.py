import json

import numpy as np
import pytest

from networkmodel.domain.model.exceptions.NetworkErrors import SchemaError
from networkmodel.domain.services.Discretization import discretize_network
from networkmodel.domain.services.PowerNetworkFactory import build_power_network
from terminal.domain.model.aggregates.TerminalIngredients import SubsystemIngredients, TerminalIngredients
from terminal.domain.model.value_objects.LmiLifting import LmiLifting
from terminal.domain.model.value_objects.TerminalSetParams import SubsystemTerminalParams, TerminalSetParams
from terminal.domain.services.InvarianceConstraints import in_terminal_set
from terminal.domain.services.InvarianceVerifier import invariance_check_montecarlo, verify_decrease
from terminal.domain.services.TerminalGeometry import TerminalGeometry
from terminal.infrastructure.persistence.repositories.IngredientsRepositoryImpl import IngredientsRepositoryImpl
from tests.conftest import build_scalar_network


def test_scalar_ingredients_have_expected_shapes(scalar_ingredients, scalar_network):
    assert scalar_ingredients.mismatches(scalar_network) == []
    P = scalar_ingredients.of(1).P
    assert P.shape == (1, 1) and P[0, 0] > 0
    assert scalar_ingredients.of(1).K.shape == (1, 1)


def test_scalar_terminal_controller_is_stabilizing(scalar_ingredients, scalar_network):
    A_cl = scalar_ingredients.closed_loop(scalar_network)
    assert np.max(np.abs(np.linalg.eigvals(A_cl))) < 1.0


def test_decrease_certificate_holds(scalar_ingredients, scalar_network, pair_ingredients, pair_network):
    rng = np.random.default_rng(0)
    assert verify_decrease(scalar_network, scalar_ingredients, 200, rng).holds
    assert verify_decrease(pair_network, pair_ingredients, 200, rng).holds


def test_certificate_is_recorded(pair_ingredients):
    certificate = pair_ingredients.certificate
    assert certificate.lifting is LmiLifting.OWN_BLOCK
    assert certificate.objective > 0
    assert certificate.max_lmi_violation < 1e-6
    assert [s.id for s in certificate.subsystems] == [1, 2]


def test_neighborhood_lifting_certifies_the_pair_network(synthesis, pair_network):
    # holds for this instance only; the neighborhood lifting carries no general decrease guarantee
    ingredients = synthesis.synthesize(pair_network, lifting=LmiLifting.NEIGHBORHOOD)
    assert ingredients.certificate.lifting is LmiLifting.NEIGHBORHOOD
    assert verify_decrease(pair_network, ingredients, 200, np.random.default_rng(1)).holds


def test_continuous_network_is_rejected(synthesis):
    with pytest.raises(SchemaError):
        synthesis.synthesize(build_power_network())


def test_non_positive_epsilon_is_rejected(synthesis, scalar_network):
    with pytest.raises(ValueError):
        synthesis.synthesize(scalar_network, epsilon=0.0)


def test_mismatched_ingredients_are_reported(scalar_ingredients, pair_network):
    assert scalar_ingredients.mismatches(pair_network)


def test_ingredients_round_trip(tmp_path, pair_ingredients, pair_network):
    repository = IngredientsRepositoryImpl()
    loaded = repository.load(repository.save(pair_ingredients, tmp_path / "ingredients.json"))
    for i in pair_network.ids:
        np.testing.assert_allclose(loaded.of(i).P, pair_ingredients.of(i).P)
        np.testing.assert_allclose(loaded.of(i).K, pair_ingredients.of(i).K)
    assert loaded.certificate.lifting is pair_ingredients.certificate.lifting


def test_ingredient_ids_must_be_contiguous(tmp_path):
    path = tmp_path / "gap.json"
    path.write_text(json.dumps({"subsystems": [{"id": 2, "P": [[1.0]], "K": [[0.0]]}]}))
    with pytest.raises(SchemaError):
        IngredientsRepositoryImpl().load(path)


# =========================================================================
# TERMINAL SETS
# =========================================================================

def test_terminal_set_membership():
    P = np.diag([4.0, 1.0])
    assert in_terminal_set([0.5, 0.0], [0.0, 0.0], 1.0, P)
    assert not in_terminal_set([0.6, 0.0], [0.0, 0.0], 1.0, P)
    with pytest.raises(ValueError):
        in_terminal_set([0.0, 0.0], [0.0, 0.0], -1.0, P)


def test_scaled_params_keep_centers():
    params = TerminalSetParams({1: SubsystemTerminalParams(alpha=2.0, c=[1.0], d=[0.0])})
    scaled = params.scaled(0.5)
    assert scaled.of(1).alpha == 1.0
    np.testing.assert_array_equal(scaled.of(1).c, [1.0])


def test_negative_radius_is_rejected():
    with pytest.raises(ValueError):
        SubsystemTerminalParams(alpha=-0.1, c=[0.0], d=[0.0])


def test_small_origin_centred_set_is_invariant(scalar_ingredients, scalar_network):
    P = scalar_ingredients.of(1).P[0, 0]
    params = TerminalSetParams({1: SubsystemTerminalParams(alpha=0.5 * np.sqrt(P), c=[0.0], d=[0.0])})
    geometry = TerminalGeometry.build(scalar_network, scalar_ingredients, 1)
    report = invariance_check_montecarlo(geometry, params, 500, np.random.default_rng(3))
    assert report.holds()
    assert report.state_residual < 0


def test_unstabilizing_gain_breaks_invariance():
    network = build_scalar_network(a=1.1)
    ingredients = TerminalIngredients(subsystems=(SubsystemIngredients(id=1, P=[[1.0]], K=[[0.5]]),))
    params = TerminalSetParams({1: SubsystemTerminalParams(alpha=1.0, c=[0.0], d=[0.0])})
    geometry = TerminalGeometry.build(network, ingredients, 1)
    assert invariance_check_montecarlo(geometry, params, 200, np.random.default_rng(4)).successor_residual > 0
    assert not verify_decrease(network, ingredients, 50, np.random.default_rng(5)).holds


@pytest.mark.slow
def test_benchmark_ingredients_are_certified(benchmark_network, benchmark_ingredients):
    assert benchmark_ingredients.mismatches(benchmark_network) == []
    report = verify_decrease(benchmark_network, benchmark_ingredients, 500, np.random.default_rng(2024))
    assert report.holds
    assert report.spectral_radius < 1.0

import pytest
from fastapi.testclient import TestClient

from main import app
from networkmodel.infrastructure.persistence.repositories.NetworkRepositoryImpl import NetworkRepositoryImpl
from mpc.application.internal.pipelineservice.PipelineServiceImpl import PipelineServiceImpl, get_pipeline_service
from shared.infrastructure.configuration.solver_configuration import SolverSettings


@pytest.fixture(scope="module")
def client():
    services = PipelineServiceImpl(
        SolverSettings(solver="CLARABEL", feas_tol=1e-8, gap_tol=1e-8, jobs=1, log_level="INFO"),
    )
    app.dependency_overrides[get_pipeline_service] = lambda: services
    yield TestClient(app)
    app.dependency_overrides.clear()


@pytest.fixture(scope="module")
def scalar_payload(scalar_network):
    return NetworkRepositoryImpl.to_resource(scalar_network).model_dump(mode="json")


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json() == {"status": "healthy", "service": "dmpc"}


def test_benchmark_network(client):
    response = client.get("/api/v1/networks/benchmark")
    assert response.status_code == 200
    body = response.json()
    assert len(body["subsystems"]) == 7
    assert body["continuous"] is True
    assert body["neighbors"][0] == [1, 2]


def test_synthesis_of_a_posted_network(client, scalar_payload):
    response = client.post("/api/v1/synthesis", json={"network": scalar_payload})
    assert response.status_code == 200
    body = response.json()
    assert body["spectral_radius"] < 1.0
    assert body["ingredients"]["subsystems"][0]["id"] == 1


def test_simulation_of_a_posted_network(client, scalar_payload):
    request = {
        "variant": "DST",
        "network": scalar_payload,
        "x_init": [0.0],
        "reference": [{"start_time": 0, "x_r": [1.0]}],
        "T_sim": 3,
    }
    response = client.post("/api/v1/simulations", json=request)
    assert response.status_code == 200
    body = response.json()
    assert body["completed"] and len(body["steps"]) == 3
    assert body["closed_loop_cost"] > 0


def test_infeasible_simulation_is_reported_not_failed(client, scalar_payload):
    request = {
        "variant": "DST",
        "network": scalar_payload,
        "x_init": [6.0],
        "reference": [{"start_time": 0, "x_r": [0.0]}],
        "T_sim": 3,
    }
    body = client.post("/api/v1/simulations", json=request).json()
    assert body["completed"] is False
    assert body["infeasible_at"] == 0


def test_admm_request_without_step_size_is_unprocessable(client):
    response = client.post("/api/v1/simulations", json={"solver_mode": "admm", "seed": 1})
    assert response.status_code == 422


def test_wrong_state_size_is_a_bad_request(client, scalar_payload):
    request = {
        "network": scalar_payload,
        "x_init": [0.0, 1.0],
        "reference": [{"start_time": 0, "x_r": [0.0]}],
    }
    assert client.post("/api/v1/simulations", json=request).status_code == 400

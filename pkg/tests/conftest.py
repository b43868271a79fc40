"""Toy networks shared by the test suite"""
import numpy as np
import pytest

from networkmodel.domain.model.aggregates.NetworkModel import NetworkModel, SubsystemModel
from networkmodel.domain.services.Discretization import discretize_network
from networkmodel.domain.services.PowerNetworkFactory import build_power_network
from optimization.domain.model.value_objects.SolveOptions import SolveOptions
from optimization.infrastructure.solvers.CvxpySolverAdapter import CvxpySolverAdapter
from terminal.application.internal.synthesisservice.SynthesisServiceImpl import SynthesisServiceImpl


def scalar_subsystem(i: int, A, G, g=(5.0, 5.0), Q=None, hc=(2.0, 2.0)) -> SubsystemModel:
    A = np.atleast_2d(np.asarray(A, dtype=float))
    return SubsystemModel(
        id=i,
        A=A,
        B=np.array([[1.0]]),
        G=np.asarray(G, dtype=float),
        g=np.asarray(g, dtype=float),
        Hc=np.array([[1.0], [-1.0]]),
        hc=np.asarray(hc, dtype=float),
        Q=np.eye(A.shape[1]) if Q is None else np.asarray(Q, dtype=float),
        R=np.array([[1.0]]),
        S=np.array([[10.0]]),
    )


def build_scalar_network(a: float = 1.1, horizon: int = 5) -> NetworkModel:
    """x+ = a x + u, |x| <= 5, |u| <= 2"""
    return NetworkModel(
        subsystems=(scalar_subsystem(1, [[a]], [[1.0], [-1.0]]),),
        neighbor_sets=((1,),),
        horizon=horizon,
    )


def build_pair_network(horizon: int = 5) -> NetworkModel:
    """Two coupled scalar subsystems, each constraining its own state"""
    return NetworkModel(
        subsystems=(
            scalar_subsystem(1, [[0.9, 0.2]], [[1.0, 0.0], [-1.0, 0.0]], Q=np.diag([1.0, 0.1])),
            scalar_subsystem(2, [[0.2, 0.8]], [[0.0, 1.0], [0.0, -1.0]], Q=np.diag([0.1, 1.0])),
        ),
        neighbor_sets=((1, 2), (1, 2)),
        horizon=horizon,
    )


@pytest.fixture(scope="session")
def solver() -> CvxpySolverAdapter:
    return CvxpySolverAdapter(SolveOptions(solver="CLARABEL", feas_tol=1e-8, gap_tol=1e-8))


@pytest.fixture(scope="session")
def scalar_network() -> NetworkModel:
    return build_scalar_network()


@pytest.fixture(scope="session")
def pair_network() -> NetworkModel:
    return build_pair_network()


@pytest.fixture(scope="session")
def synthesis(solver) -> SynthesisServiceImpl:
    return SynthesisServiceImpl(solver)


@pytest.fixture(scope="session")
def scalar_ingredients(synthesis, scalar_network):
    return synthesis.synthesize(scalar_network)


@pytest.fixture(scope="session")
def pair_ingredients(synthesis, pair_network):
    return synthesis.synthesize(pair_network)


@pytest.fixture(scope="session")
def benchmark_network() -> NetworkModel:
    """Power benchmark sampled with h = 1 s"""
    return discretize_network(build_power_network(), 1.0)


@pytest.fixture(scope="session")
def benchmark_ingredients(synthesis, benchmark_network):
    return synthesis.synthesize(benchmark_network)

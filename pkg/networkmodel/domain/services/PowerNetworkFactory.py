"""
Seven-area power network used as the reference benchmark.
State of area i: (angle deviation, frequency deviation, mechanical power
deviation, steam valve deviation); input: reference power deviation.
"""
import logging
from dataclasses import dataclass

import numpy as np
from scipy.linalg import block_diag

from networkmodel.domain.model.aggregates.NetworkModel import NetworkModel, SubsystemModel

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PgaParams:
    """Physical constants of one power generation area"""
    H: float        # inertia
    D: float        # damping
    R_t: float      # droop
    T_t: float      # turbine time constant
    T_g: float      # governor time constant
    p_max: float    # bound on the reference power deviation

    def __post_init__(self):
        for name, value in vars(self).items():
            if value <= 0:
                raise ValueError(f"PGA parameter {name} must be positive, got {value}")


PGA_TABLE: dict[int, PgaParams] = {
    1: PgaParams(H=12.0, D=0.05, R_t=0.7, T_t=0.65, T_g=0.1, p_max=0.5),
    2: PgaParams(H=10.0, D=0.0625, R_t=0.9, T_t=0.4, T_g=0.1, p_max=0.65),
    3: PgaParams(H=8.0, D=0.8, R_t=0.9, T_t=0.3, T_g=0.1, p_max=0.65),
    4: PgaParams(H=8.0, D=0.8, R_t=0.7, T_t=0.6, T_g=0.1, p_max=0.55),
    5: PgaParams(H=8.0, D=0.8, R_t=0.9, T_t=0.3, T_g=0.1, p_max=0.65),
    6: PgaParams(H=10.0, D=0.0625, R_t=0.9, T_t=0.4, T_g=0.1, p_max=0.65),
    7: PgaParams(H=12.0, D=0.05, R_t=0.7, T_t=0.65, T_g=0.1, p_max=0.5),
}

# Tie-line strengths, P_ij = P_ji
COUPLINGS: dict[tuple[int, int], float] = {
    (1, 2): 4.0,
    (2, 3): 2.0,
    (2, 5): 1.0,
    (3, 4): 2.0,
    (4, 5): 2.0,
    (5, 6): 3.0,
    (5, 7): 3.0,
}

ANGLE_LIMIT = 0.1
INPUT_WEIGHT = 0.1
OFFSET_WEIGHT = np.diag([1000.0, 1000.0, 10.0, 10.0])
OWN_SHARE = 0.99
NEIGHBOR_SHARE = 0.01
HORIZON = 5
SAMPLING_TIME = 1.0
STATE_DIM = 4


def coupling(i: int, j: int) -> float:
    return COUPLINGS.get((min(i, j), max(i, j)), 0.0)


def benchmark_neighbors() -> dict[int, tuple[int, ...]]:
    neighbors = {i: {i} for i in PGA_TABLE}
    for i, j in COUPLINGS:
        neighbors[i].add(j)
        neighbors[j].add(i)
    return {i: tuple(sorted(n)) for i, n in neighbors.items()}


def own_block(p: PgaParams, total_coupling: float) -> np.ndarray:
    return np.array([
        [0.0, 1.0, 0.0, 0.0],
        [-total_coupling / (2 * p.H), -p.D / (2 * p.H), 1.0 / (2 * p.H), 0.0],
        [0.0, 0.0, -1.0 / p.T_t, 1.0 / p.T_t],
        [0.0, -1.0 / (p.R_t * p.T_g), 0.0, -1.0 / p.T_g],
    ])


def coupling_block(p: PgaParams, strength: float) -> np.ndarray:
    block = np.zeros((STATE_DIM, STATE_DIM))
    block[1, 0] = strength / (2 * p.H)
    return block


def build_q_weights() -> dict[int, np.ndarray]:
    """Neighborhood weights: 0.99 S on the own block, 0.01 S on each neighbor block"""
    weights = {}
    for i, neighbors in benchmark_neighbors().items():
        blocks = [(OWN_SHARE if j == i else NEIGHBOR_SHARE) * OFFSET_WEIGHT for j in neighbors]
        weights[i] = block_diag(*blocks)
    return weights


def build_power_network() -> NetworkModel:
    """Continuous-time seven-area benchmark (discretize with h = 1 s before use)"""
    neighbor_sets = benchmark_neighbors()
    q_weights = build_q_weights()
    subsystems = []
    for i, p in PGA_TABLE.items():
        neighbors = neighbor_sets[i]
        total = sum(coupling(i, j) for j in neighbors if j != i)
        A = np.hstack([own_block(p, total) if j == i else coupling_block(p, coupling(i, j)) for j in neighbors])

        angle = np.zeros((1, STATE_DIM * len(neighbors)))
        angle[0, STATE_DIM * neighbors.index(i)] = 1.0

        subsystems.append(SubsystemModel(
            id=i,
            A=A,
            B=np.array([[0.0], [0.0], [0.0], [1.0 / p.T_g]]),
            G=np.vstack([angle, -angle]),
            g=np.full(2, ANGLE_LIMIT),
            Hc=np.array([[1.0], [-1.0]]),
            hc=np.full(2, p.p_max),
            Q=q_weights[i],
            R=np.array([[INPUT_WEIGHT]]),
            S=OFFSET_WEIGHT,
        ))

    logger.info(f"Power network built with {len(subsystems)} areas and {len(COUPLINGS)} tie lines")
    return NetworkModel(
        subsystems=tuple(subsystems),
        neighbor_sets=tuple(neighbor_sets[i] for i in sorted(neighbor_sets)),
        horizon=HORIZON,
        continuous=True,
        sampling_time=SAMPLING_TIME,
    )

"""
Random equilibrium targets and initial states.
Targets are equilibrium-consistent pairs (x_r, u_r) taken along a random
direction of the null space of [I - A, -B] and scaled to lie inside the
constraint polytopes shrunk by a factor (0.8 unless told otherwise).
"""
import logging

import numpy as np
from scipy.linalg import null_space

from networkmodel.domain.model.aggregates.NetworkModel import NetworkModel
from mpc.domain.model.exceptions.MpcErrors import MpcError

logger = logging.getLogger(__name__)

SHRINK = 0.8
MAX_TRIES = 10_000


def equilibrium_directions(model: NetworkModel) -> np.ndarray:
    """Orthonormal basis (columns) of the (x, u) pairs with x = A x + B u"""
    A, B = model.global_dynamics
    return null_space(np.hstack([np.eye(model.n_total) - A, -B]))


def admissible_scale(model: NetworkModel, x: np.ndarray, u: np.ndarray,
                     shrink: float = SHRINK, cap: float = 1.0) -> float:
    """Largest s with s x and s u inside the shrunk polytopes; s ||x||_inf <= cap bounds unconstrained directions"""
    limit = cap / max(float(np.max(np.abs(x))), 1e-12)
    states = model.split_state(x)
    inputs = model.split_input(u)
    for i in model.ids:
        sub = model.subsystem(i)
        xN = model.lift({j: states[j] for j in model.neighbors(i)}, i)
        for row, bound in ((sub.G @ xN, sub.g), (sub.Hc @ inputs[i], sub.hc)):
            for a, b in zip(row, bound):
                if a > 1e-12:
                    limit = min(limit, shrink * b / a)
    return max(limit, 0.0)


def sample_target(model: NetworkModel, rng: np.random.Generator, shrink: float = SHRINK) -> tuple[np.ndarray, np.ndarray]:
    basis = equilibrium_directions(model)
    if basis.shape[1] == 0:
        raise MpcError("The network has no equilibrium besides the origin")
    direction = basis @ rng.standard_normal(basis.shape[1])
    x, u = direction[:model.n_total], direction[model.n_total:]
    if not np.any(np.abs(x) > 1e-12):
        return np.zeros(model.n_total), np.zeros(model.m_total)
    scale = admissible_scale(model, x, u, shrink) * rng.uniform()
    return scale * x, scale * u


def sample_targets(model: NetworkModel, count: int, rng: np.random.Generator,
                   shrink: float = SHRINK) -> list[tuple[np.ndarray, np.ndarray]]:
    targets = [sample_target(model, rng, shrink) for _ in range(count)]
    logger.info(f"Sampled {count} equilibrium targets")
    return targets


def state_admissible(model: NetworkModel, x: np.ndarray, tol: float = 0.0) -> bool:
    states = model.split_state(x)
    for i in model.ids:
        sub = model.subsystem(i)
        xN = model.lift({j: states[j] for j in model.neighbors(i)}, i)
        if np.any(sub.G @ xN > sub.g + tol):
            return False
    return True


def sample_initial_states(model: NetworkModel, count: int, rng: np.random.Generator,
                          radius: float) -> list[np.ndarray]:
    """Uniform in the box ||x||_inf <= radius, rejecting states outside the state polytopes"""
    samples, tries = [], 0
    while len(samples) < count:
        tries += 1
        if tries > MAX_TRIES * max(count, 1):
            raise MpcError(f"Could not draw {count} admissible initial states within radius {radius}")
        x = rng.uniform(-radius, radius, size=model.n_total)
        if state_admissible(model, x):
            samples.append(x)
    return samples

import logging
from dataclasses import dataclass

import numpy as np

from networkmodel.domain.model.aggregates.NetworkModel import NetworkModel
from terminal.domain.model.aggregates.TerminalIngredients import TerminalIngredients
from terminal.domain.model.value_objects.TerminalSetParams import TerminalSetParams
from terminal.domain.services.TerminalGeometry import TerminalGeometry

logger = logging.getLogger(__name__)

DECREASE_TOL = 1e-6


@dataclass(frozen=True)
class DecreaseReport:
    """Sampled check of V(x+) - V(x) <= -x'Qx - u'Ru under u = K x"""
    n_samples: int
    max_violation: float
    n_violations: int
    spectral_radius: float

    @property
    def holds(self) -> bool:
        return self.n_violations == 0


@dataclass(frozen=True)
class InvarianceReport:
    """Worst residuals of successor membership, state rows and input rows; <= 0 means satisfied"""
    id: int
    n_samples: int
    successor_residual: float
    state_residual: float
    input_residual: float

    def holds(self, tol: float = 1e-6) -> bool:
        return max(self.successor_residual, self.state_residual, self.input_residual) <= tol


def sample_ball(rng: np.random.Generator, n_samples: int, dim: int) -> np.ndarray:
    """Uniform samples in the unit ball, one per row"""
    directions = sample_sphere(rng, n_samples, dim)
    radii = rng.random(n_samples) ** (1.0 / dim)
    return directions * radii[:, None]


def sample_sphere(rng: np.random.Generator, n_samples: int, dim: int) -> np.ndarray:
    directions = rng.standard_normal((n_samples, dim))
    norms = np.linalg.norm(directions, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    return directions / norms


def sample_neighborhood(
        geometry: TerminalGeometry,
        params: TerminalSetParams,
        rng: np.random.Generator,
        n_samples: int,
        on_boundary: bool = False,
) -> np.ndarray:
    """Points x_N with every x_j in its ellipsoid, rows are samples"""
    blocks = []
    for j in geometry.neighbors:
        p = params.of(j)
        n_j = p.c.size
        unit = sample_sphere(rng, n_samples, n_j) if on_boundary else sample_ball(rng, n_samples, n_j)
        blocks.append(p.c + p.alpha * unit @ geometry.P_inv_sqrt[j].T)
    return np.hstack(blocks)


def invariance_check_montecarlo(
        geometry: TerminalGeometry,
        params: TerminalSetParams,
        n_samples: int,
        rng: np.random.Generator,
) -> InvarianceReport:
    """Sample the neighborhood ellipsoids and evaluate the terminal controller"""
    i = geometry.id
    own = params.of(i)
    X = np.vstack([
        sample_neighborhood(geometry, params, rng, n_samples),
        sample_neighborhood(geometry, params, rng, max(1, n_samples // 10), on_boundary=True),
        np.concatenate([params.of(j).c for j in geometry.neighbors])[None, :],
    ])
    U = X @ geometry.K.T + own.d
    X_next = X @ geometry.A.T + U @ geometry.B.T

    dx = X_next - own.c
    forms = np.einsum("si,ij,sj->s", dx, geometry.P, dx)
    successor = float(np.max(forms - own.alpha ** 2))
    state = float(np.max(X @ geometry.G.T - geometry.g)) if geometry.q else -np.inf
    inputs = float(np.max(U @ geometry.Hc.T - geometry.hc)) if geometry.r else -np.inf

    return InvarianceReport(
        id=i,
        n_samples=X.shape[0],
        successor_residual=successor,
        state_residual=state,
        input_residual=inputs,
    )


def sampled_state_support(
        geometry: TerminalGeometry,
        params: TerminalSetParams,
        k: int,
        n_samples: int,
        rng: np.random.Generator,
) -> float:
    """
    Sampled maximum of G^k x_N over the product of neighborhood ellipsoids.
    A linear function separates over the blocks, so each block is maximized on
    its own boundary and the maxima are added.
    """
    return _sampled_support(geometry, params, geometry.G[k], 0.0, n_samples, rng)


def sampled_input_support(
        geometry: TerminalGeometry,
        params: TerminalSetParams,
        l: int,
        n_samples: int,
        rng: np.random.Generator,
) -> float:
    """Sampled maximum of Hc^l (K x_N + d) over the neighborhood ellipsoids"""
    offset = float(geometry.Hc[l] @ params.of(geometry.id).d)
    return _sampled_support(geometry, params, geometry.HcK[l], offset, n_samples, rng)


def _sampled_support(geometry, params, row, offset, n_samples, rng) -> float:
    total = offset
    for j in geometry.neighbors:
        p = params.of(j)
        coefficients = geometry.W[j] @ row
        points = p.c + p.alpha * sample_sphere(rng, n_samples, p.c.size) @ geometry.P_inv_sqrt[j].T
        total += float(np.max(points @ coefficients))
    return total


def verify_decrease(
        model: NetworkModel,
        ingredients: TerminalIngredients,
        n_samples: int,
        rng: np.random.Generator,
        tol: float = DECREASE_TOL,
) -> DecreaseReport:
    """
    Global Lyapunov decrease on random states. The inequality is homogeneous,
    so samples are normalized to V(x) = 1 and the origin is always included.
    """
    A, B = model.global_dynamics
    Q, R = model.global_weights
    P = ingredients.global_P(model)
    K = ingredients.global_K(model)
    A_cl = A + B @ K

    X = rng.standard_normal((n_samples, model.n_total))
    scale = np.sqrt(np.einsum("si,ij,sj->s", X, P, X))
    scale[scale == 0] = 1.0
    X = np.vstack([X / scale[:, None], np.zeros((1, model.n_total))])

    U = X @ K.T
    X_next = X @ A_cl.T
    violation = (
        np.einsum("si,ij,sj->s", X_next, P, X_next)
        - np.einsum("si,ij,sj->s", X, P, X)
        + np.einsum("si,ij,sj->s", X, Q, X)
        + np.einsum("si,ij,sj->s", U, R, U)
    )
    report = DecreaseReport(
        n_samples=X.shape[0],
        max_violation=float(violation.max()),
        n_violations=int(np.sum(violation > tol)),
        spectral_radius=float(np.max(np.abs(np.linalg.eigvals(A_cl)))),
    )
    if report.holds:
        logger.info(f"✓ Decrease certificate holds on {report.n_samples} samples (rho={report.spectral_radius:.4f})")
    else:
        logger.warning(f"✗ Decrease violated on {report.n_violations}/{report.n_samples} samples")
    return report

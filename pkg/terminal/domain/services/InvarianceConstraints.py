"""
Online terminal-set constraints of one subsystem.
Builders take cvxpy expressions and return affine expressions, so the same code
emits OCP constraints and, fed with constants, evaluates them numerically.
"""
from dataclasses import dataclass

import cvxpy as cp
import numpy as np

from networkmodel.domain.model.exceptions.NetworkErrors import DimensionError
from terminal.domain.model.value_objects.TerminalSetParams import TerminalSetParams
from terminal.domain.services.TerminalGeometry import TerminalGeometry

MEMBERSHIP_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class TerminalSymbols:
    """Decision variables (or constants) entering subsystem i's terminal constraints"""
    alpha: dict[int, cp.Expression]
    c: dict[int, cp.Expression]
    d: cp.Expression
    lam: cp.Expression
    b: cp.Expression | None = None

    @classmethod
    def constant(cls, geometry: TerminalGeometry, params: TerminalSetParams) -> "TerminalSymbols":
        own = params.of(geometry.id)
        return cls(
            alpha={j: cp.Constant(float(params.of(j).alpha)) for j in geometry.neighbors},
            c={j: cp.Constant(params.of(j).c) for j in geometry.neighbors},
            d=cp.Constant(own.d),
            lam=cp.Constant(np.array([own.lam.get(j, 0.0) for j in geometry.neighbors])),
            b=cp.Constant(own.b) if own.b is not None else None,
        )


def in_terminal_set(x, c, alpha: float, P) -> bool:
    """(x - c)' P (x - c) <= alpha^2"""
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    dx = np.asarray(x, dtype=float).reshape(-1) - np.asarray(c, dtype=float).reshape(-1)
    P = np.atleast_2d(np.asarray(P, dtype=float))
    if P.shape != (dx.size, dx.size):
        raise DimensionError(f"P of shape {P.shape} does not match a state of size {dx.size}")
    return float(dx @ P @ dx) <= alpha ** 2 + MEMBERSHIP_TOL


# =============================================================================
# NEIGHBORHOOD AGGREGATES
# =============================================================================

def alpha_stack(geometry: TerminalGeometry, symbols: TerminalSymbols) -> cp.Expression:
    """(alpha_j)_{j in N_i} as a vector"""
    return sum(symbols.alpha[j] * geometry.unit(j) for j in geometry.neighbors)


def alpha_diagonal(geometry: TerminalGeometry, symbols: TerminalSymbols) -> cp.Expression:
    """Diagonal of alpha_N"""
    return sum(symbols.alpha[j] * geometry.masks[j] for j in geometry.neighbors)


def center_stack(geometry: TerminalGeometry, symbols: TerminalSymbols) -> cp.Expression:
    """c_N"""
    return sum(geometry.W[j].T @ symbols.c[j] for j in geometry.neighbors)


def center_error(geometry: TerminalGeometry, symbols: TerminalSymbols) -> cp.Expression:
    """(A_i + B_i K_i) c_N + B_i d_i - c_i"""
    return geometry.A_K @ center_stack(geometry, symbols) + geometry.B @ symbols.d - symbols.c[geometry.id]


# =============================================================================
# INVARIANCE LMI
# =============================================================================

def invariance_lmi(geometry: TerminalGeometry, symbols: TerminalSymbols) -> cp.Expression:
    """
    [[P_i^{-1} alpha_i,  A_K alpha_N,         e              ],
     [*,                 sum_j lam_j P_ij,    0              ],
     [*,                 *,                   alpha_i - sum lam]]
    """
    n, n_N = geometry.n, geometry.n_neighborhood
    i = geometry.id
    top_left = symbols.alpha[i] * geometry.P_inv
    coupling = sum(symbols.alpha[j] * (geometry.A_K @ geometry.W[j].T @ geometry.W[j]) for j in geometry.neighbors)
    middle = sum(symbols.lam[k] * geometry.P_lifted[j] for k, j in enumerate(geometry.neighbors))
    e = cp.reshape(center_error(geometry, symbols), (n, 1), order="C")
    corner = cp.reshape(symbols.alpha[i] - cp.sum(symbols.lam), (1, 1), order="C")
    return cp.bmat([
        [top_left, coupling, e],
        [coupling.T, middle, np.zeros((n_N, 1))],
        [e.T, np.zeros((1, n_N)), corner],
    ])


def invariance_matrix(geometry: TerminalGeometry, params: TerminalSetParams) -> np.ndarray:
    """Numeric invariance LMI at fixed parameters"""
    return np.asarray(invariance_lmi(geometry, TerminalSymbols.constant(geometry, params)).value, dtype=float)


# =============================================================================
# ROBUST STATE AND INPUT CONSTRAINTS (support functions)
# =============================================================================

def state_support_rows(geometry: TerminalGeometry, symbols: TerminalSymbols) -> cp.Expression:
    """G c_N + sum_j ||G^k W_ij' P_j^{-1/2}|| alpha_j - g, feasible when <= 0"""
    return (
        geometry.G @ center_stack(geometry, symbols)
        + geometry.state_norms @ alpha_stack(geometry, symbols)
        - geometry.g
    )


def state_support_constraint(geometry: TerminalGeometry, symbols: TerminalSymbols, k: int) -> cp.Expression:
    """Row k (0-based) of state_support_rows"""
    return (
        geometry.G[k] @ center_stack(geometry, symbols)
        + geometry.state_norms[k] @ alpha_stack(geometry, symbols)
        - geometry.g[k]
    )


def input_support_rows(geometry: TerminalGeometry, symbols: TerminalSymbols) -> cp.Expression:
    """Hc K c_N + Hc d + sum_j ||Hc^l K W_ij' P_j^{-1/2}|| alpha_j - hc, feasible when <= 0"""
    return (
        geometry.HcK @ center_stack(geometry, symbols)
        + geometry.Hc @ symbols.d
        + geometry.input_norms @ alpha_stack(geometry, symbols)
        - geometry.hc
    )


def input_support_constraint(geometry: TerminalGeometry, symbols: TerminalSymbols, l: int) -> cp.Expression:
    """Row l (0-based) of input_support_rows"""
    return (
        geometry.HcK[l] @ center_stack(geometry, symbols)
        + geometry.Hc[l] @ symbols.d
        + geometry.input_norms[l] @ alpha_stack(geometry, symbols)
        - geometry.hc[l]
    )


# =============================================================================
# DIAGONAL DOMINANCE
# =============================================================================

def dd_linearization(geometry: TerminalGeometry, symbols: TerminalSymbols) -> list[tuple[str, cp.Expression]]:
    """
    Linear rows, each required >= 0, making the invariance LMI diagonally dominant.
    The slack b_i bounds the last column: -b_i <= e <= b_i.
    """
    if symbols.b is None:
        raise ValueError("Diagonal dominance rows need the slack b")
    i = geometry.id
    alpha_diag = alpha_diagonal(geometry, symbols)
    e = center_error(geometry, symbols)

    first = symbols.alpha[i] * geometry.P_inv_dd - geometry.A_K_abs @ alpha_diag - symbols.b
    second = (
        sum(symbols.lam[k] * geometry.P_lifted_dd[j] for k, j in enumerate(geometry.neighbors))
        - cp.multiply(geometry.A_K_abs.sum(axis=0), alpha_diag)
    )
    third = symbols.alpha[i] - cp.sum(symbols.lam) - cp.sum(symbols.b)
    return [
        ("dd_first", first),
        ("dd_second", second),
        ("dd_third", third),
        ("dd_slack_upper", symbols.b - e),
        ("dd_slack_lower", symbols.b + e),
    ]


def dd_feasible(geometry: TerminalGeometry, params: TerminalSetParams, tol: float = 1e-9) -> bool:
    """True when the fixed parameters satisfy every diagonal dominance row"""
    rows = dd_linearization(geometry, TerminalSymbols.constant(geometry, params))
    return all(np.all(np.asarray(expr.value) >= -tol) for _, expr in rows)

import logging

import cvxpy as cp
import numpy as np

from networkmodel.domain.model.aggregates.NetworkModel import NetworkModel
from optimization.domain.model.aggregates.ConicProgram import ConicProgram
from optimization.domain.services.MatrixFactors import psd_sqrt
from mpc.domain.model.value_objects.DecisionBlocks import LocalBlock, SharedBlock
from mpc.domain.model.value_objects.OcpVariant import OcpVariant
from terminal.domain.services.InvarianceConstraints import (
    TerminalSymbols,
    alpha_diagonal,
    alpha_stack,
    center_stack,
    dd_linearization,
    input_support_rows,
    invariance_lmi,
    state_support_rows,
)
from terminal.domain.services.TerminalGeometry import TerminalGeometry

logger = logging.getLogger(__name__)


class SubsystemProblemAssembler:
    """
    Emits subsystem i's part of the online problem: its constraints go into the
    program, its cost is returned. Shared blocks of every neighbor must be given;
    the same code serves the central problem and the local ADMM problems.
    """

    def __init__(self, model: NetworkModel, geometry: TerminalGeometry, variant: OcpVariant):
        self._model = model
        self._geometry = geometry
        self._variant = variant
        sub = model.subsystem(geometry.id)
        self._Q_sqrt = psd_sqrt(sub.Q)
        self._R_sqrt = psd_sqrt(sub.R)
        self._S_sqrt = psd_sqrt(sub.S)

    @property
    def id(self) -> int:
        return self._geometry.id

    @property
    def geometry(self) -> TerminalGeometry:
        return self._geometry

    def symbols(self, shared: dict[int, SharedBlock], local: LocalBlock) -> TerminalSymbols:
        geo = self._geometry
        if self._variant is OcpVariant.APP:
            return TerminalSymbols(
                alpha={j: shared[j].alpha for j in geo.neighbors},
                c={j: shared[j].c for j in geo.neighbors},
                d=cp.Constant(np.zeros(geo.m)),
                lam=local.rho,
            )
        return TerminalSymbols(
            alpha={j: shared[j].alpha for j in geo.neighbors},
            c={j: shared[j].c for j in geo.neighbors},
            d=local.d,
            lam=local.lam,
            b=local.b,
        )

    def assemble(
            self,
            program: ConicProgram,
            shared: dict[int, SharedBlock],
            local: LocalBlock,
            x_init: cp.Parameter,
            x_r: cp.Parameter | None = None,
    ) -> cp.Expression:
        geo = self._geometry
        i, T = geo.id, self._model.T
        own = shared[i]

        # neighborhood trajectory over t = 0..T-1, one row per step
        XN = cp.hstack([shared[j].x[:T, :] for j in geo.neighbors])

        program.add_zero(f"initial_{i}", own.x[0, :] - x_init)
        program.add_zero(f"dynamics_{i}", own.x[1:, :] - (XN @ geo.A.T + local.u @ geo.B.T))
        if geo.q:
            program.add_nonneg(f"state_polytope_{i}", np.tile(geo.g, (T, 1)) - XN @ geo.G.T)
        if geo.r:
            program.add_nonneg(f"input_polytope_{i}", np.tile(geo.hc, (T, 1)) - local.u @ geo.Hc.T)
        symbols = self.symbols(shared, local)
        program.add_nonneg(f"alpha_{i}", alpha_stack(geo, symbols))
        if self._variant is OcpVariant.APP:
            self._app_terminal(program, symbols, own, local)
            return self._app_cost(XN, own, local)

        xeN = sum(geo.W[j].T @ shared[j].xe for j in geo.neighbors)
        program.add_zero(f"equilibrium_state_{i}", own.xe - (geo.A @ xeN + geo.B @ local.ue))
        program.add_zero(f"equilibrium_input_{i}", local.ue - (geo.K @ xeN + local.d))
        program.add_soc(f"terminal_{i}", own.alpha, geo.P_sqrt @ (own.x[T, :] - own.c))
        program.add_nonneg(f"lambda_{i}", local.lam)

        if self._variant is OcpVariant.DST:
            program.add_psd(f"invariance_{i}", invariance_lmi(geo, symbols))
        else:
            program.add_nonneg(f"dd_slack_{i}", local.b)
            for name, row in dd_linearization(geo, symbols):
                program.add_nonneg(f"{name}_{i}", row)

        if geo.q:
            program.add_nonneg(f"state_support_{i}", -state_support_rows(geo, symbols))
        if geo.r:
            program.add_nonneg(f"input_support_{i}", -input_support_rows(geo, symbols))

        return self._tracking_cost(XN, own, local, xeN, x_r)

    # =========================================================================
    # COSTS
    # =========================================================================

    def _tracking_cost(self, XN, own: SharedBlock, local: LocalBlock, xeN, x_r) -> cp.Expression:
        T = self._model.T
        geo = self._geometry
        ones = np.ones((T, 1))
        state_dev = XN - ones @ cp.reshape(xeN, (1, geo.n_neighborhood), order="C")
        input_dev = local.u - ones @ cp.reshape(local.ue, (1, geo.m), order="C")
        return (
            cp.sum_squares(state_dev @ self._Q_sqrt)
            + cp.sum_squares(input_dev @ self._R_sqrt)
            + cp.sum_squares(geo.P_sqrt @ (own.x[T, :] - own.xe))
            + cp.sum_squares(self._S_sqrt @ (own.xe - x_r))
        )

    def _app_cost(self, XN, own: SharedBlock, local: LocalBlock) -> cp.Expression:
        T = self._model.T
        return (
            cp.sum_squares(XN @ self._Q_sqrt)
            + cp.sum_squares(local.u @ self._R_sqrt)
            + cp.sum_squares(self._geometry.P_sqrt @ own.x[T, :])
        )

    # =========================================================================
    # REGULATION BASELINE TERMINAL CONSTRAINTS
    # =========================================================================

    def _app_terminal(self, program: ConicProgram, symbols: TerminalSymbols, own: SharedBlock, local: LocalBlock):
        geo = self._geometry
        i, n, n_N, T = geo.id, geo.n, geo.n_neighborhood, self._model.T

        gap = cp.reshape(own.x[T, :] - own.c, (n, 1), order="C")
        program.add_psd(f"terminal_{i}", cp.bmat([
            [own.alpha * geo.P_inv, gap],
            [gap.T, cp.reshape(own.alpha, (1, 1), order="C")],
        ]))
        program.add_nonneg(f"rho_{i}", local.rho)
        program.add_psd(f"invariance_{i}", invariance_lmi(geo, symbols))

        alpha_diag = alpha_diagonal(geo, symbols)
        c_N = center_stack(geo, symbols)
        if geo.q:
            program.add_nonneg(f"sigma_{i}", local.sigma)
            for k in range(geo.q):
                program.add_psd(f"state_lmi_{i}_{k}", self._robust_row_lmi(
                    local.sigma[k, :], alpha_diag, geo.G[k], geo.g[k] - geo.G[k] @ c_N,
                ))
        if geo.r:
            program.add_nonneg(f"tau_{i}", local.tau)
            for l in range(geo.r):
                program.add_psd(f"input_lmi_{i}_{l}", self._robust_row_lmi(
                    local.tau[l, :], alpha_diag, geo.HcK[l], geo.hc[l] - geo.HcK[l] @ c_N,
                ))

    def _robust_row_lmi(self, multipliers, alpha_diag, row: np.ndarray, slack) -> cp.Expression:
        """[[sum_j s_j P_ij, alpha_N row' / 2], [*, slack - sum_j s_j]]"""
        geo = self._geometry
        n_N = geo.n_neighborhood
        weighted = sum(multipliers[k] * geo.P_lifted[j] for k, j in enumerate(geo.neighbors))
        column = cp.reshape(cp.multiply(alpha_diag, row) / 2, (n_N, 1), order="C")
        corner = cp.reshape(slack - cp.sum(multipliers), (1, 1), order="C")
        return cp.bmat([[weighted, column], [column.T, corner]])

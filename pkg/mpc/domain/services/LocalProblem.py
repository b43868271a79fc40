import logging

import cvxpy as cp
import numpy as np

from networkmodel.domain.model.aggregates.NetworkModel import NetworkModel
from optimization.domain.model.aggregates.ConicProgram import ConicProgram
from optimization.domain.model.value_objects.SolveResult import SolveResult
from mpc.domain.model.value_objects.DecisionBlocks import LocalBlock, SharedBlock
from mpc.domain.model.value_objects.OcpVariant import OcpVariant
from mpc.domain.model.value_objects.SharingLayout import SharingLayout
from mpc.domain.services.SubsystemProblemAssembler import SubsystemProblemAssembler

logger = logging.getLogger(__name__)


class LocalProblem:
    """
    Subsystem i's ADMM subproblem: its own cost and constraints over local
    copies of the neighborhood's shared blocks, plus the proximal term
    rho/2 ||w||^2 - anchor'w with anchor = rho z_N_i - y_N_i.
    Rebuilt whenever rho changes; x_init, x_r and the anchor are parameters.
    """

    def __init__(self, model: NetworkModel, assembler: SubsystemProblemAssembler,
                 layout: SharingLayout, variant: OcpVariant, rho: float):
        self.id = i = assembler.id
        self.rho = float(rho)
        self._variant = variant
        geo = assembler.geometry

        self.shared = {
            j: SharedBlock.create(j, model.subsystem(j).n, model.T, variant, owner=i)
            for j in model.neighbors(i)
        }
        self.local = LocalBlock.create(i, geo.n, geo.m, model.T, len(geo.neighbors), geo.q, geo.r, variant, owner=i)
        self.x_init = cp.Parameter(geo.n, name=f"x_init_{i}@{i}", value=np.zeros(geo.n))
        self.x_r = cp.Parameter(geo.n, name=f"x_r_{i}@{i}", value=np.zeros(geo.n)) if variant.tracks_reference else None
        self.anchor = cp.Parameter(layout.local_size(i), name=f"anchor_{i}", value=layout.local_zeros(i))

        self.program = ConicProgram(name=f"local_{variant.value}_{i}")
        cost = assembler.assemble(self.program, self.shared, self.local, self.x_init, self.x_r)
        self.w = cp.hstack([self.shared[j].flatten() for j in model.neighbors(i)])
        self.program.set_objective(cost + (self.rho / 2) * cp.sum_squares(self.w) - self.anchor @ self.w)

    def set_data(self, x_init: np.ndarray, x_r: np.ndarray | None) -> None:
        self.x_init.value = np.asarray(x_init, dtype=float)
        if self.x_r is not None:
            self.x_r.value = np.asarray(x_r, dtype=float)

    def set_anchor(self, anchor: np.ndarray) -> None:
        self.anchor.value = np.asarray(anchor, dtype=float)

    def shared_value(self) -> np.ndarray:
        return np.asarray(self.w.value, dtype=float).reshape(-1)

    def local_values(self, result: SolveResult) -> dict[str, np.ndarray]:
        """Non-shared variables keyed by their central names"""
        suffix = f"@{self.id}"
        return {
            name.removesuffix(suffix): value
            for name, value in result.values.items()
            if name.endswith(suffix) and name.split("_", 1)[0] in _LOCAL_ROLES
        }


_LOCAL_ROLES = frozenset({"u", "ue", "d", "lam", "b", "rho", "sigma", "tau"})

import copy
import logging
from dataclasses import dataclass

import numpy as np

from mpc.domain.model.exceptions.MpcErrors import StepSizeError
from mpc.domain.model.value_objects.DecisionBlocks import SharedBlock
from mpc.domain.model.value_objects.SharingLayout import SharingLayout

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class IterationRecord:
    """Residuals after one completed iteration"""
    iteration: int
    primal_residual: float
    dual_residual: float
    elapsed_s: float
    rho: float


class AdmmState:
    """
    Aggregate Root: iterate of the consensus ADMM
    w[i] is subsystem i's copy of its neighborhood's shared blocks, v[i] its
    non-shared variables, z the global copy and y[i] the multipliers of w[i].
    """

    def __init__(self, layout: SharingLayout, rho: float):
        if not rho > 0:
            raise StepSizeError(f"ADMM step size must be positive, got {rho}")
        self.layout = layout
        self.rho = float(rho)
        self.k = 0
        self.w = {i: layout.local_zeros(i) for i in layout.model.ids}
        self.v: dict[int, dict[str, np.ndarray]] = {i: {} for i in layout.model.ids}
        self.z = layout.zeros()
        self.z_previous = layout.zeros()
        self.y = {i: layout.local_zeros(i) for i in layout.model.ids}
        self.history: list[IterationRecord] = []

    # =========================================================================
    # UPDATES
    # =========================================================================

    def anchor(self, i: int) -> np.ndarray:
        """rho z_N_i - y_N_i, the linear term of subsystem i's augmented Lagrangian"""
        return self.rho * self.layout.gather(self.z, i) - self.y[i]

    def set_local(self, i: int, w: np.ndarray, v: dict[str, np.ndarray]) -> None:
        self.w[i] = np.asarray(w, dtype=float)
        self.v[i] = v

    def consensus_step(self) -> np.ndarray:
        self.z_previous = self.z
        self.z = self.layout.average(self.w)
        return self.z

    def dual_step(self) -> dict[int, np.ndarray]:
        for i in self.layout.model.ids:
            self.y[i] = self.y[i] + self.rho * (self.w[i] - self.layout.gather(self.z, i))
        return self.y

    def primal_residual(self) -> float:
        return float(np.sqrt(sum(
            np.sum((self.w[i] - self.layout.gather(self.z, i)) ** 2) for i in self.layout.model.ids
        )))

    def dual_residual(self) -> float:
        return float(self.rho * np.linalg.norm(self.z - self.z_previous))

    def record(self, elapsed_s: float) -> IterationRecord:
        self.k += 1
        row = IterationRecord(
            iteration=self.k,
            primal_residual=self.primal_residual(),
            dual_residual=self.dual_residual(),
            elapsed_s=elapsed_s,
            rho=self.rho,
        )
        self.history.append(row)
        return row

    def dual_sums(self) -> float:
        """Largest entry of sum_i y_j^(i) over the holders of each block; zero from a zero start"""
        worst = 0.0
        for j in self.layout.model.ids:
            total = sum(self.layout.block_of(self.y[i], i, j) for i in self.layout.holders[j])
            worst = max(worst, float(np.max(np.abs(total))))
        return worst

    def rescale(self, rho: float) -> None:
        """Change the step size; y is unscaled and carries over unchanged"""
        if not rho > 0:
            raise StepSizeError(f"ADMM step size must be positive, got {rho}")
        self.rho = float(rho)

    # =========================================================================
    # SNAPSHOTS AND WARM STARTS
    # =========================================================================

    def snapshot(self) -> dict:
        return {
            "k": self.k,
            "rho": self.rho,
            "w": copy.deepcopy(self.w),
            "v": copy.deepcopy(self.v),
            "z": self.z.copy(),
            "z_previous": self.z_previous.copy(),
            "y": copy.deepcopy(self.y),
            "history": list(self.history),
        }

    def restore(self, snapshot: dict) -> None:
        self.k = snapshot["k"]
        self.rho = snapshot["rho"]
        self.w = snapshot["w"]
        self.v = snapshot["v"]
        self.z = snapshot["z"]
        self.z_previous = snapshot["z_previous"]
        self.y = snapshot["y"]
        self.history = snapshot["history"]

    def shifted(self) -> "AdmmState":
        """
        Warm start for the next sampling instant: state trajectories in z move
        one step forward with the last state repeated, the duals are shifted the
        same way and the iteration counter and history restart.
        """
        nxt = AdmmState(self.layout, self.rho)
        blocks = self.layout.unpack(self.z)
        for block in blocks.values():
            block["x"] = np.vstack([block["x"][1:], block["x"][-1:]])
        nxt.z = self.layout.pack(blocks)
        nxt.z_previous = nxt.z.copy()
        nxt.y = {i: self._shift_local(i, y) for i, y in self.y.items()}
        nxt.w = {i: self.layout.gather(nxt.z, i) for i in self.layout.model.ids}
        return nxt

    def _shift_local(self, i: int, vector: np.ndarray) -> np.ndarray:
        model, variant = self.layout.model, self.layout.variant
        parts = []
        for j in model.neighbors(i):
            block = SharedBlock.unflatten(self.layout.block_of(vector, i, j), model.subsystem(j).n, model.T, variant)
            block["x"] = np.vstack([block["x"][1:], block["x"][-1:]])
            parts.append(SharedBlock.pack(block, variant))
        return np.concatenate(parts)

    def __repr__(self) -> str:
        return f"AdmmState(k={self.k}, rho={self.rho})"

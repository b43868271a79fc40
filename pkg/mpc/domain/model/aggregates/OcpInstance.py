import logging

import cvxpy as cp
import numpy as np

from networkmodel.domain.model.aggregates.NetworkModel import NetworkModel
from networkmodel.domain.model.exceptions.NetworkErrors import DimensionError
from optimization.domain.model.aggregates.ConicProgram import ConicProgram
from mpc.domain.model.value_objects.DecisionBlocks import LocalBlock, SharedBlock
from mpc.domain.model.value_objects.OcpVariant import OcpVariant
from terminal.domain.model.aggregates.TerminalIngredients import TerminalIngredients
from terminal.domain.services.TerminalGeometry import TerminalGeometry

logger = logging.getLogger(__name__)


class OcpInstance:
    """
    Aggregate Root: one online problem with its fixed data
    The measured state and the reference are cvxpy parameters, so the same
    instance is re-solved along a closed-loop run without being rebuilt.
    """

    def __init__(
            self,
            variant: OcpVariant,
            model: NetworkModel,
            ingredients: TerminalIngredients,
            geometries: dict[int, TerminalGeometry],
            program: ConicProgram,
            shared: dict[int, SharedBlock],
            local: dict[int, LocalBlock],
            x_init: dict[int, cp.Parameter],
            x_r: dict[int, cp.Parameter],
    ):
        self.variant = variant
        self.model = model
        self.ingredients = ingredients
        self.geometries = geometries
        self.program = program
        self.shared = shared
        self.local = local
        self._x_init = x_init
        self._x_r = x_r

    def set_initial_state(self, x_init) -> None:
        for i, block in self.model.split_state(x_init).items():
            self._x_init[i].value = block

    def set_reference(self, x_r) -> None:
        if not self.variant.tracks_reference:
            if x_r is not None and np.any(np.asarray(x_r) != 0):
                raise DimensionError("The regulation baseline only accepts a zero reference")
            return
        for i, block in self.model.split_state(x_r).items():
            self._x_r[i].value = block

    @property
    def initial_state(self) -> np.ndarray:
        return self.model.stack_state({i: p.value for i, p in self._x_init.items()})

    @property
    def reference(self) -> np.ndarray:
        if not self._x_r:
            return np.zeros(self.model.n_total)
        return self.model.stack_state({i: p.value for i, p in self._x_r.items()})

    def reference_of(self, i: int) -> np.ndarray:
        if not self._x_r:
            return np.zeros(self.model.subsystem(i).n)
        return np.asarray(self._x_r[i].value, dtype=float)

    def __repr__(self) -> str:
        return f"OcpInstance(variant={self.variant.value}, M={self.model.M}, T={self.model.T})"

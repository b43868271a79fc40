from dataclasses import dataclass, field

import numpy as np

from networkmodel.domain.model.aggregates.NetworkModel import NetworkModel
from optimization.domain.model.value_objects.SolveStatus import SolveStatus
from mpc.domain.model.value_objects.OcpVariant import OcpVariant
from terminal.domain.model.value_objects.TerminalSetParams import SubsystemTerminalParams, TerminalSetParams


@dataclass(frozen=True, eq=False)
class SubsystemTrajectory:
    """Predicted trajectory, equilibrium and terminal set of one subsystem"""
    id: int
    x: np.ndarray
    u: np.ndarray
    xe: np.ndarray
    ue: np.ndarray
    terminal: SubsystemTerminalParams
    multipliers: dict[str, np.ndarray] = field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class TrajectorySolution:
    """
    Value Object: primal point of an online problem
    objective is the problem objective recomputed at this point
    """
    variant: OcpVariant
    subsystems: dict[int, SubsystemTrajectory]
    objective: float
    status: SolveStatus
    dynamics_residual: float
    wall_time: float = 0.0
    iterations: int | None = None

    def of(self, i: int) -> SubsystemTrajectory:
        return self.subsystems[i]

    def first_input(self, model: NetworkModel) -> np.ndarray:
        """u(0) of every subsystem, stacked"""
        return model.stack_input({i: s.u[0] for i, s in self.subsystems.items()})

    def terminal_params(self) -> TerminalSetParams:
        return TerminalSetParams({i: s.terminal for i, s in self.subsystems.items()})

    def center_offset(self) -> float:
        """Largest distance between a terminal center and its equilibrium"""
        return max(float(np.linalg.norm(s.terminal.c - s.xe)) for s in self.subsystems.values())

    def equilibrium(self, model: NetworkModel) -> tuple[np.ndarray, np.ndarray]:
        return (
            model.stack_state({i: s.xe for i, s in self.subsystems.items()}),
            model.stack_input({i: s.ue for i, s in self.subsystems.items()}),
        )

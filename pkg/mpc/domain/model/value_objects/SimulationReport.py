from dataclasses import dataclass, field, replace

import numpy as np

from mpc.domain.model.aggregates.AdmmState import IterationRecord
from mpc.domain.model.exceptions.MpcErrors import InfeasibleAtStepError
from mpc.domain.model.value_objects.OcpVariant import OcpVariant


@dataclass(frozen=True, eq=False)
class StepRecord:
    """One sampling instant of a closed-loop run"""
    step: int
    x_init: np.ndarray
    x_r: np.ndarray
    status: str
    u_applied: np.ndarray | None = None
    objective: float | None = None
    wall_time: float = 0.0
    iterations: int | None = None
    primal_residual: float | None = None
    dual_residual: float | None = None
    alphas: dict[int, float] = field(default_factory=dict)
    centers: dict[int, np.ndarray] = field(default_factory=dict)
    offsets: dict[int, np.ndarray] = field(default_factory=dict)
    center_offset: float | None = None
    admm_history: tuple[IterationRecord, ...] = ()

    @property
    def feasible(self) -> bool:
        return self.u_applied is not None


@dataclass(frozen=True, eq=False)
class SimulationReport:
    """
    Value Object: outcome of a receding-horizon run
    closed_loop_cost is J_s, defined once every step was feasible; states holds
    x(0..T_sim) as far as the run got.
    """
    variant: OcpVariant
    solver_mode: str
    budget_mode: str | None
    steps: tuple[StepRecord, ...]
    states: tuple[np.ndarray, ...]
    closed_loop_cost: float | None
    tracking_error: float | None
    infeasible_at: int | None = None
    suboptimality: float | None = None

    @property
    def completed(self) -> bool:
        return self.infeasible_at is None

    @property
    def inputs(self) -> tuple[np.ndarray, ...]:
        return tuple(s.u_applied for s in self.steps if s.u_applied is not None)

    @property
    def iteration_counts(self) -> list[int]:
        return [s.iterations for s in self.steps if s.iterations is not None]

    def raise_for_status(self) -> None:
        if self.infeasible_at is not None:
            raise InfeasibleAtStepError(
                self.infeasible_at,
                f"{self.variant.value} became infeasible at step {self.infeasible_at}",
            )

    def with_suboptimality(self, reference_cost: float | None) -> "SimulationReport":
        """Copy with |J_s - reference| / reference when both runs completed and the reference is positive"""
        value = None
        if self.completed and self.closed_loop_cost is not None and reference_cost is not None and reference_cost > 0:
            value = abs(self.closed_loop_cost - reference_cost) / reference_cost
        return replace(self, suboptimality=value)

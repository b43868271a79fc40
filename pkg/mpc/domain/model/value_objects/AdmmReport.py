from dataclasses import dataclass

from mpc.domain.model.aggregates.AdmmState import IterationRecord
from mpc.domain.model.value_objects.OcpVariant import OcpVariant


@dataclass(frozen=True)
class AdmmReport:
    """
    Value Object: how one ADMM run went
    budget_mode is "wall_clock" (nondeterministic) or "max_iters"
    """
    variant: OcpVariant
    budget_mode: str
    iterations: int
    history: tuple[IterationRecord, ...]
    wall_time: float
    converged: bool
    rho: float
    dual_sum: float
    objective: float
    suboptimality: float | None = None

    @property
    def primal_residual(self) -> float:
        return self.history[-1].primal_residual if self.history else float("nan")

    @property
    def dual_residual(self) -> float:
        return self.history[-1].dual_residual if self.history else float("nan")

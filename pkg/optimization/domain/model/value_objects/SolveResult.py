from dataclasses import dataclass, field

import numpy as np

from optimization.domain.model.value_objects.SolveStatus import SolveStatus


@dataclass(frozen=True)
class SolverStats:
    """Backend statistics of one solve"""
    solver: str
    iterations: int | None = None
    solve_time: float | None = None
    wall_time: float = 0.0
    max_violation: float | None = None
    inaccurate: bool = False


@dataclass(frozen=True)
class SolveResult:
    """
    Value Object: outcome of a solve
    values holds the primal value of every named variable; it is empty unless
    the status is OPTIMAL or TIME_LIMIT with an incumbent.
    """
    status: SolveStatus
    objective: float | None
    stats: SolverStats
    values: dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def has_incumbent(self) -> bool:
        return bool(self.values) and self.status in (SolveStatus.OPTIMAL, SolveStatus.TIME_LIMIT)

    def value(self, name: str) -> np.ndarray:
        return self.values[name]

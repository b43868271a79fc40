from enum import Enum


class SolveStatus(str, Enum):
    """Outcome of a conic solve"""
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    TIME_LIMIT = "time_limit"
    NUMERICAL_ERROR = "numerical_error"

    @property
    def is_feasible(self) -> bool:
        return self is SolveStatus.OPTIMAL

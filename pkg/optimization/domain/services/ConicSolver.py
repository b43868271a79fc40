from typing import Protocol

from optimization.domain.model.aggregates.ConicProgram import ConicProgram
from optimization.domain.model.value_objects.SolveOptions import SolveOptions
from optimization.domain.model.value_objects.SolveResult import SolveResult


class ConicSolver(Protocol):
    """
    Interface of a conic backend
    Implementations never raise on infeasible or failed solves; they report a status
    """

    def solve(self, program: ConicProgram, options: SolveOptions | None = None) -> SolveResult:
        """Solve the program and collect primal values of its named variables"""
        ...

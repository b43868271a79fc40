import logging
from collections import Counter
from dataclasses import dataclass

import cvxpy as cp
import numpy as np

from optimization.domain.model.exceptions.OptimizationErrors import ProgramValidationError
from optimization.domain.model.value_objects.ConeKind import ConeKind

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ConicConstraint:
    """A named cone membership"""
    name: str
    kind: ConeKind
    constraint: cp.Constraint


class ConicProgram:
    """
    Aggregate Root: convex conic program
    Minimizes a convex quadratic plus linear objective over affine maps of named
    variables constrained to zero, nonnegative, second-order or PSD cones.
    The program is frozen once its cvxpy problem has been built.
    """

    def __init__(self, name: str, objective: cp.Expression | float = 0.0):
        self.name = name
        self._objective = cp.Constant(0.0) if isinstance(objective, (int, float)) else objective
        self._constraints: list[ConicConstraint] = []
        self._problem: cp.Problem | None = None

    # =========================================================================
    # CONSTRUCTION
    # =========================================================================

    def _append(self, name: str, kind: ConeKind, constraint: cp.Constraint) -> ConicConstraint:
        if self._problem is not None:
            raise ProgramValidationError(f"Program '{self.name}' is frozen; cannot add '{name}'")
        row = ConicConstraint(name=name, kind=kind, constraint=constraint)
        self._constraints.append(row)
        return row

    def set_objective(self, objective: cp.Expression) -> None:
        if self._problem is not None:
            raise ProgramValidationError(f"Program '{self.name}' is frozen; cannot change the objective")
        self._objective = objective

    def add_objective(self, term: cp.Expression) -> None:
        self.set_objective(self._objective + term)

    def add_zero(self, name: str, expression: cp.Expression) -> ConicConstraint:
        """expression == 0"""
        return self._append(name, ConeKind.ZERO, expression == 0)

    def add_nonneg(self, name: str, expression: cp.Expression) -> ConicConstraint:
        """expression >= 0 elementwise"""
        return self._append(name, ConeKind.NONNEGATIVE, expression >= 0)

    def add_soc(self, name: str, t: cp.Expression, x: cp.Expression) -> ConicConstraint:
        """||x||_2 <= t"""
        return self._append(name, ConeKind.SECOND_ORDER, cp.SOC(t, x))

    def add_psd(self, name: str, matrix: cp.Expression) -> ConicConstraint:
        """matrix in the PSD cone; only the symmetric part is constrained"""
        if len(matrix.shape) != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ProgramValidationError(f"PSD constraint '{name}' needs a square matrix, got {matrix.shape}")
        if not matrix.is_affine():
            raise ProgramValidationError(f"PSD constraint '{name}' must be affine in the variables")
        return self._append(name, ConeKind.PSD, cp.PSD((matrix + matrix.T) / 2))

    # =========================================================================
    # INSPECTION
    # =========================================================================

    @property
    def constraints(self) -> tuple[ConicConstraint, ...]:
        return tuple(self._constraints)

    @property
    def objective(self) -> cp.Expression:
        return self._objective

    def cones(self, kind: ConeKind) -> list[ConicConstraint]:
        return [c for c in self._constraints if c.kind is kind]

    def constraint(self, name: str) -> ConicConstraint:
        for row in self._constraints:
            if row.name == name:
                return row
        raise KeyError(name)

    @property
    def problem(self) -> cp.Problem:
        if self._problem is None:
            self.validate()
            self._problem = cp.Problem(cp.Minimize(self._objective), [c.constraint for c in self._constraints])
        return self._problem

    @property
    def variables(self) -> dict[str, cp.Variable]:
        problem = self._problem or cp.Problem(cp.Minimize(self._objective), [c.constraint for c in self._constraints])
        return {v.name(): v for v in problem.variables()}

    def validate(self) -> None:
        """Raise ProgramValidationError when the program is not a convex conic program"""
        if self._objective.size != 1:
            raise ProgramValidationError(f"Objective of '{self.name}' must be scalar")
        if not self._objective.is_convex() or not self._objective.is_dcp():
            raise ProgramValidationError(f"Objective of '{self.name}' is not convex")
        for row in self._constraints:
            if not row.constraint.is_dcp():
                raise ProgramValidationError(f"Constraint '{row.name}' of '{self.name}' is not convex")

        problem = cp.Problem(cp.Minimize(self._objective), [c.constraint for c in self._constraints])
        duplicates = [n for n, k in Counter(v.name() for v in problem.variables()).items() if k > 1]
        if duplicates:
            raise ProgramValidationError(f"Variables declared twice in '{self.name}': {duplicates}")
        duplicates = [n for n, k in Counter(c.name for c in self._constraints).items() if k > 1]
        if duplicates:
            raise ProgramValidationError(f"Constraint names repeated in '{self.name}': {duplicates}")

    def evaluate_objective(self) -> float:
        """Objective at the variables' current values"""
        value = self._objective.value
        return float(np.asarray(value).reshape(-1)[0])

    def __repr__(self) -> str:
        counts = Counter(c.kind.value for c in self._constraints)
        return f"ConicProgram(name={self.name!r}, constraints={dict(counts)})"

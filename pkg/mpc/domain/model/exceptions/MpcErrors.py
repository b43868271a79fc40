class MpcError(ValueError):
    """Base error of the online control context"""


class IngredientMismatchError(MpcError):
    """Terminal ingredients were not synthesized for this network"""


class NoIncumbentError(MpcError):
    """A solve ended without a primal point to extract"""


class DynamicsResidualError(MpcError):
    """An extracted trajectory does not satisfy the dynamics"""


class LocalInfeasibleError(MpcError):
    """A subsystem's local problem has no feasible point"""

    def __init__(self, subsystem: int, message: str):
        super().__init__(message)
        self.subsystem = subsystem


class StepSizeError(MpcError):
    """The ADMM step size must be positive"""


class BudgetTooSmallError(MpcError):
    """No ADMM iteration fits in the budget"""


class InfeasibleAtStepError(MpcError):
    """The online problem became infeasible during a closed-loop run"""

    def __init__(self, step: int, message: str):
        super().__init__(message)
        self.step = step

class OptimizationError(ValueError):
    """Base error of the conic layer"""


class AsymmetryError(OptimizationError):
    """A matrix expected to be symmetric is not"""


class ProgramValidationError(OptimizationError):
    """A program breaks a structural rule (non-convex objective, duplicate names, frozen program)"""

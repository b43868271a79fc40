from dataclasses import dataclass, field
from enum import Enum

from mpc.domain.model.exceptions.MpcErrors import StepSizeError


class SolverModeKind(str, Enum):
    CENTRAL = "central"
    ADMM = "admm"


@dataclass(frozen=True)
class AdmmBudget:
    """
    Termination of one ADMM run
    max_time in seconds of wall clock, max_iters in iterations; either or both
    """
    max_iters: int | None = None
    max_time: float | None = None

    def __post_init__(self):
        if self.max_iters is None and self.max_time is None:
            raise ValueError("An ADMM budget needs max_iters, max_time or both")
        if self.max_iters is not None and self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if self.max_time is not None and self.max_time <= 0:
            raise ValueError("max_time must be positive")

    @property
    def is_wall_clock(self) -> bool:
        return self.max_time is not None

    @property
    def label(self) -> str:
        return "wall_clock" if self.is_wall_clock else "max_iters"


@dataclass(frozen=True)
class AdmmSettings:
    """Step size and options of the consensus iteration"""
    rho: float = 1.0
    budget: AdmmBudget = field(default_factory=lambda: AdmmBudget(max_iters=200))
    residual_balancing: bool = False
    warm_start: bool = True
    tolerance: float | None = None
    balancing_mu: float = 10.0
    balancing_tau: float = 2.0

    def __post_init__(self):
        if not self.rho > 0:
            raise StepSizeError(f"ADMM step size must be positive, got {self.rho}")


@dataclass(frozen=True)
class SolverMode:
    """Central solve or consensus ADMM"""
    kind: SolverModeKind = SolverModeKind.CENTRAL
    admm: AdmmSettings | None = None

    def __post_init__(self):
        if self.kind is SolverModeKind.ADMM and self.admm is None:
            raise ValueError("ADMM mode needs AdmmSettings")

    @classmethod
    def central(cls) -> "SolverMode":
        return cls(SolverModeKind.CENTRAL)

    @classmethod
    def consensus(cls, settings: AdmmSettings) -> "SolverMode":
        return cls(SolverModeKind.ADMM, settings)

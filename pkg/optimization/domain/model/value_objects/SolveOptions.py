from dataclasses import dataclass, replace

from shared.infrastructure.configuration.solver_configuration import SolverSettings, load_solver_settings


@dataclass(frozen=True)
class SolveOptions:
    """
    Tolerances and limits handed to the backend
    fallback names the backend retried when the first one fails numerically
    """
    solver: str = "CLARABEL"
    feas_tol: float = 1e-7
    gap_tol: float = 1e-7
    time_limit: float | None = None
    max_iters: int | None = None
    warm_start: bool = False
    verbose: bool = False
    fallback: str | None = "SCS"

    @classmethod
    def from_settings(cls, settings: SolverSettings | None = None) -> "SolveOptions":
        settings = settings or load_solver_settings()
        return cls(
            solver=settings.solver,
            feas_tol=settings.feas_tol,
            gap_tol=settings.gap_tol,
            fallback=settings.fallback,
        )

    def with_time_limit(self, seconds: float | None) -> "SolveOptions":
        return replace(self, time_limit=seconds)

    def fallback_options(self) -> "SolveOptions | None":
        """Same tolerances and limits on the fallback backend, or None when there is none"""
        if self.fallback is None or self.fallback.upper() == self.solver.upper():
            return None
        return replace(self, solver=self.fallback.upper(), fallback=None, warm_start=False)

import logging
import time

import cvxpy as cp
import numpy as np

from optimization.domain.model.aggregates.ConicProgram import ConicProgram
from optimization.domain.model.value_objects.SolveOptions import SolveOptions
from optimization.domain.model.value_objects.SolveResult import SolveResult, SolverStats
from optimization.domain.model.value_objects.SolveStatus import SolveStatus

logger = logging.getLogger(__name__)

_STATUS_MAP = {
    cp.OPTIMAL: SolveStatus.OPTIMAL,
    cp.OPTIMAL_INACCURATE: SolveStatus.OPTIMAL,
    cp.INFEASIBLE: SolveStatus.INFEASIBLE,
    cp.INFEASIBLE_INACCURATE: SolveStatus.INFEASIBLE,
    cp.UNBOUNDED: SolveStatus.UNBOUNDED,
    cp.UNBOUNDED_INACCURATE: SolveStatus.UNBOUNDED,
    cp.USER_LIMIT: SolveStatus.TIME_LIMIT,
}


def solver_kwargs(options: SolveOptions) -> dict:
    """Translate tolerances and limits into backend keyword arguments"""
    solver = options.solver.upper()
    if solver == "CLARABEL":
        kwargs = {
            "tol_feas": options.feas_tol,
            "tol_gap_abs": options.gap_tol,
            "tol_gap_rel": options.gap_tol,
        }
        if options.time_limit is not None:
            kwargs["time_limit"] = float(options.time_limit)
        if options.max_iters is not None:
            kwargs["max_iter"] = int(options.max_iters)
        return kwargs
    if solver == "SCS":
        kwargs = {"eps_abs": options.feas_tol, "eps_rel": options.gap_tol}
        if options.time_limit is not None:
            kwargs["time_limit_secs"] = float(options.time_limit)
        if options.max_iters is not None:
            kwargs["max_iters"] = int(options.max_iters)
        return kwargs
    if solver == "MOSEK":
        params = {
            "MSK_DPAR_INTPNT_CO_TOL_PFEAS": options.feas_tol,
            "MSK_DPAR_INTPNT_CO_TOL_DFEAS": options.feas_tol,
            "MSK_DPAR_INTPNT_CO_TOL_REL_GAP": options.gap_tol,
        }
        if options.time_limit is not None:
            params["MSK_DPAR_OPTIMIZER_MAX_TIME"] = float(options.time_limit)
        return {"mosek_params": params}
    raise ValueError(f"Unsupported solver '{options.solver}'")


def max_violation(program: ConicProgram) -> float | None:
    worst = 0.0
    for row in program.constraints:
        try:
            violation = row.constraint.violation()
        except ValueError:
            return None
        if violation is None:
            return None
        worst = max(worst, float(np.max(np.atleast_1d(violation))))
    return worst


class CvxpySolverAdapter:
    """
    ConicSolver backed by cvxpy
    Clarabel by default; SCS and MOSEK selectable through SolveOptions.solver
    """

    def __init__(self, options: SolveOptions | None = None):
        self._options = options or SolveOptions.from_settings()

    @property
    def options(self) -> SolveOptions:
        return self._options

    def solve(self, program: ConicProgram, options: SolveOptions | None = None) -> SolveResult:
        options = options or self._options
        result = self._solve_with(program, options)
        retry = options.fallback_options()
        if result.status is SolveStatus.NUMERICAL_ERROR and retry is not None:
            logger.warning(f"✗ {options.solver} failed on '{program.name}', retrying with {retry.solver}")
            result = self._solve_with(program, retry)
        return result

    def _solve_with(self, program: ConicProgram, options: SolveOptions) -> SolveResult:
        problem = program.problem

        started = time.perf_counter()
        try:
            problem.solve(
                solver=options.solver.upper(),
                warm_start=options.warm_start,
                verbose=options.verbose,
                **solver_kwargs(options),
            )
        except cp.SolverError as e:
            wall = time.perf_counter() - started
            logger.warning(f"✗ {options.solver} failed on '{program.name}': {e}")
            return SolveResult(
                status=SolveStatus.NUMERICAL_ERROR,
                objective=None,
                stats=SolverStats(solver=options.solver, wall_time=wall),
            )
        wall = time.perf_counter() - started

        status = _STATUS_MAP.get(problem.status, SolveStatus.NUMERICAL_ERROR)
        inaccurate = problem.status in cp.settings.INACCURATE
        if inaccurate:
            logger.warning(f"Solver reported '{problem.status}' on '{program.name}'")

        values: dict[str, np.ndarray] = {}
        objective = None
        if status in (SolveStatus.OPTIMAL, SolveStatus.TIME_LIMIT):
            collected = {v.name(): v.value for v in problem.variables()}
            if all(value is not None for value in collected.values()):
                values = {name: np.array(value, dtype=float) for name, value in collected.items()}
                objective = float(problem.value) if problem.value is not None else None
            elif status is SolveStatus.OPTIMAL:
                status = SolveStatus.NUMERICAL_ERROR

        stats = problem.solver_stats
        result = SolveResult(
            status=status,
            objective=objective,
            values=values,
            stats=SolverStats(
                solver=options.solver,
                iterations=getattr(stats, "num_iters", None),
                solve_time=getattr(stats, "solve_time", None),
                wall_time=wall,
                max_violation=max_violation(program) if values else None,
                inaccurate=inaccurate,
            ),
        )
        logger.debug(f"'{program.name}' solved: {status.value} in {wall:.3f}s")
        return result

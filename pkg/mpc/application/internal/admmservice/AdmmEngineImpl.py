import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from optimization.domain.model.value_objects.SolveStatus import SolveStatus
from optimization.domain.services.ConicSolver import ConicSolver
from mpc.domain.model.aggregates.AdmmState import AdmmState
from mpc.domain.model.aggregates.OcpInstance import OcpInstance
from mpc.domain.model.exceptions.MpcErrors import BudgetTooSmallError, LocalInfeasibleError, NoIncumbentError
from mpc.domain.model.value_objects.AdmmReport import AdmmReport
from mpc.domain.model.value_objects.SharingLayout import SharingLayout
from mpc.domain.model.value_objects.SolverMode import AdmmSettings
from mpc.domain.model.value_objects.TrajectorySolution import TrajectorySolution
from mpc.domain.services.LocalProblem import LocalProblem
from mpc.domain.services.SolutionExtractor import solution_from_values
from mpc.domain.services.SubsystemProblemAssembler import SubsystemProblemAssembler

logger = logging.getLogger(__name__)

DUAL_SUM_TOL = 1e-8


def suboptimality(objective: float, reference: float | None) -> float | None:
    """|J_admm - J| / J, undefined unless the reference cost is positive"""
    if reference is None or not reference > 0:
        return None
    return abs(objective - reference) / reference


class AdmmEngineImpl:
    """
    Consensus ADMM over the online problem. Each iteration solves the M local
    problems (concurrently, one barrier), averages the shared copies and
    updates the multipliers. Local problems are cached per instance and step
    size and rebuilt when residual balancing changes rho.
    """

    def __init__(self, solver: ConicSolver, settings: AdmmSettings | None = None, jobs: int | None = None):
        self._solver = solver
        self._settings = settings or AdmmSettings()
        self._jobs = jobs or os.cpu_count() or 1
        self._cached_instance: OcpInstance | None = None
        self._cached_problems: dict[float, dict[int, LocalProblem]] = {}
        self._layout: SharingLayout | None = None

    @property
    def settings(self) -> AdmmSettings:
        return self._settings

    def layout(self, instance: OcpInstance) -> SharingLayout:
        self._bind(instance)
        return self._layout

    def initial_state(self, instance: OcpInstance, rho: float | None = None) -> AdmmState:
        """z = 0 and y = 0"""
        return AdmmState(self.layout(instance), rho or self._settings.rho)

    def _bind(self, instance: OcpInstance) -> None:
        if self._cached_instance is not instance:
            self._cached_instance = instance
            self._cached_problems = {}
            self._layout = SharingLayout(instance.model, instance.variant)

    def local_problems(self, instance: OcpInstance, rho: float) -> dict[int, LocalProblem]:
        self._bind(instance)
        if rho not in self._cached_problems:
            model = instance.model
            self._cached_problems[rho] = {
                i: LocalProblem(
                    model,
                    SubsystemProblemAssembler(model, instance.geometries[i], instance.variant),
                    self._layout,
                    instance.variant,
                    rho,
                )
                for i in model.ids
            }
            logger.debug(f"Built {model.M} local problems for {instance} at rho={rho}")
        return self._cached_problems[rho]

    # =========================================================================
    # ITERATION STEPS
    # =========================================================================

    def local_step(self, i: int, state: AdmmState, instance: OcpInstance) -> tuple[np.ndarray, dict[str, np.ndarray]]:
        """argmin of subsystem i's augmented Lagrangian given z and y"""
        problem = self.local_problems(instance, state.rho)[i]
        problem.set_data(instance.model.split_state(instance.initial_state)[i], instance.reference_of(i))
        problem.set_anchor(state.anchor(i))
        result = self._solver.solve(problem.program)
        if not result.has_incumbent:
            if result.status is SolveStatus.INFEASIBLE:
                raise LocalInfeasibleError(i, f"Local problem of subsystem {i} is infeasible")
            raise NoIncumbentError(f"Local problem of subsystem {i} ended {result.status.value}")
        return problem.shared_value(), problem.local_values(result)

    def consensus_step(self, state: AdmmState) -> np.ndarray:
        return state.consensus_step()

    def dual_step(self, state: AdmmState) -> dict[int, np.ndarray]:
        return state.dual_step()

    def iterate(self, state: AdmmState, instance: OcpInstance, pool: ThreadPoolExecutor | None = None) -> None:
        ids = instance.model.ids
        if pool is None:
            outcomes = [self.local_step(i, state, instance) for i in ids]
        else:
            outcomes = list(pool.map(lambda i: self.local_step(i, state, instance), ids))
        for i, (w, v) in zip(ids, outcomes):
            state.set_local(i, w, v)
        self.consensus_step(state)
        self.dual_step(state)

    # =========================================================================
    # RUN
    # =========================================================================

    def run(
            self,
            instance: OcpInstance,
            settings: AdmmSettings | None = None,
            state: AdmmState | None = None,
            reference_objective: float | None = None,
    ) -> tuple[TrajectorySolution, AdmmReport, AdmmState]:
        """
        Iterate until the budget is spent or, with a tolerance, both residuals
        fall below it. Under a wall-clock budget an iteration finishing past
        max_time is discarded.
        """
        settings = settings or self._settings
        budget = settings.budget
        state = state or self.initial_state(instance, settings.rho)
        converged = False
        dual_sum = 0.0

        started = time.perf_counter()
        with ThreadPoolExecutor(max_workers=min(self._jobs, instance.model.M)) as pool:
            while budget.max_iters is None or state.k < budget.max_iters:
                snapshot = state.snapshot() if budget.is_wall_clock else None
                self.iterate(state, instance, pool if self._jobs > 1 else None)
                elapsed = time.perf_counter() - started
                if budget.is_wall_clock and elapsed > budget.max_time:
                    state.restore(snapshot)
                    break

                row = state.record(elapsed)
                dual_sum = max(dual_sum, state.dual_sums())
                if settings.tolerance is not None and max(row.primal_residual, row.dual_residual) <= settings.tolerance:
                    converged = True
                    break
                if settings.residual_balancing:
                    self._balance(state, settings)

        if state.k == 0:
            raise BudgetTooSmallError(
                f"No ADMM iteration of {instance.variant.value} fits in {budget.max_time}s"
            )
        wall = time.perf_counter() - started
        scale = 1.0 + max(float(np.max(np.abs(y))) for y in state.y.values())
        if dual_sum > DUAL_SUM_TOL * scale:
            logger.warning(f"Multiplier sums drifted to {dual_sum:.3e} over {state.k} iterations")

        solution = self.extract(instance, state, converged, wall)
        report = AdmmReport(
            variant=instance.variant,
            budget_mode=budget.label,
            iterations=state.k,
            history=tuple(state.history),
            wall_time=wall,
            converged=converged,
            rho=state.rho,
            dual_sum=dual_sum,
            objective=solution.objective,
            suboptimality=suboptimality(solution.objective, reference_objective),
        )
        logger.info(
            f"ADMM {instance.variant.value}: {state.k} iterations in {wall:.3f}s, "
            f"primal {report.primal_residual:.2e}, dual {report.dual_residual:.2e}"
        )
        return solution, report, state

    def extract(self, instance: OcpInstance, state: AdmmState, converged: bool = False,
                wall_time: float = 0.0) -> TrajectorySolution:
        """Shared variables from z, non-shared ones from each subsystem's last local solve"""
        values = {}
        for j, block in state.layout.unpack(state.z).items():
            values[f"x_{j}"] = block["x"]
            values[f"alpha_{j}"] = block["alpha"]
            values[f"c_{j}"] = block["c"]
            if "xe" in block:
                values[f"xe_{j}"] = block["xe"]
        for local in state.v.values():
            values.update(local)
        return solution_from_values(
            instance,
            values,
            SolveStatus.OPTIMAL if converged else SolveStatus.TIME_LIMIT,
            strict=False,
            wall_time=wall_time,
            iterations=state.k,
        )

    def _balance(self, state: AdmmState, settings: AdmmSettings) -> None:
        row = state.history[-1]
        if row.primal_residual > settings.balancing_mu * row.dual_residual:
            state.rescale(state.rho * settings.balancing_tau)
        elif row.dual_residual > settings.balancing_mu * row.primal_residual:
            state.rescale(state.rho / settings.balancing_tau)
        else:
            return
        logger.debug(f"Residual balancing moved rho to {state.rho:g}")

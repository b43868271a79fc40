import logging

import numpy as np

from networkmodel.domain.model.aggregates.NetworkModel import NetworkModel
from networkmodel.domain.model.value_objects.ReferenceSignal import ReferenceSignal
from optimization.domain.model.value_objects.SolveStatus import SolveStatus
from optimization.domain.services.ConicSolver import ConicSolver
from mpc.application.internal.admmservice.AdmmEngineImpl import AdmmEngineImpl
from mpc.application.internal.ocpservice.OcpBuilderImpl import OcpBuilderImpl
from mpc.domain.model.aggregates.AdmmState import AdmmState
from mpc.domain.model.aggregates.OcpInstance import OcpInstance
from mpc.domain.model.commands.SimulateCommand import SimulateCommand
from mpc.domain.model.exceptions.MpcErrors import LocalInfeasibleError
from mpc.domain.model.value_objects.OcpVariant import OcpVariant
from mpc.domain.model.value_objects.SimulationReport import SimulationReport, StepRecord
from mpc.domain.model.value_objects.SolverMode import SolverMode, SolverModeKind
from mpc.domain.model.value_objects.TrajectorySolution import TrajectorySolution
from terminal.domain.model.aggregates.TerminalIngredients import TerminalIngredients

logger = logging.getLogger(__name__)


def closed_loop_cost(model: NetworkModel, states, inputs, reference: ReferenceSignal) -> float:
    """
    J_s over t = 0..T_sim with T_sim = len(inputs): the last term uses the
    final measured state and holds the last applied input.
    u_r(t) is the equilibrium input of x_r(t).
    """
    total = 0.0
    for t, x in enumerate(states):
        u = inputs[min(t, len(inputs) - 1)]
        x_r = reference.at(t)
        u_r = model.equilibrium_input(x_r)
        xs, us = model.split_state(x), model.split_input(u)
        xrs, urs = model.split_state(x_r), model.split_input(u_r)
        for i in model.ids:
            nb = model.neighbors(i)
            total += model.stage_cost(
                i,
                model.lift({j: xs[j] for j in nb}, i),
                us[i],
                model.lift({j: xrs[j] for j in nb}, i),
                urs[i],
            )
    return float(total)


def replay(model: NetworkModel, x_init, inputs) -> list[np.ndarray]:
    """Re-simulate recorded inputs through the plant"""
    states = [np.asarray(x_init, dtype=float)]
    for u in inputs:
        states.append(model.propagate(states[-1], u))
    return states


class SimulationServiceImpl:
    """
    Receding-horizon loop: at every sampling instant solve the online problem
    (centrally or by ADMM under its budget), apply u(0), propagate the plant.
    An infeasible step is recorded and halts the run.
    """

    def __init__(self, builder: OcpBuilderImpl, solver: ConicSolver, jobs: int | None = None):
        self._builder = builder
        self._solver = solver
        self._jobs = jobs

    def execute(self, command: SimulateCommand, model: NetworkModel,
                ingredients: TerminalIngredients) -> SimulationReport:
        return self.simulate(
            model, ingredients, command.variant, np.asarray(command.x_init, dtype=float),
            command.reference, command.T_sim, command.solver_mode,
        )

    def simulate(
            self,
            model: NetworkModel,
            ingredients: TerminalIngredients,
            variant: OcpVariant,
            x_init,
            reference: ReferenceSignal | np.ndarray,
            T_sim: int,
            solver_mode: SolverMode | None = None,
    ) -> SimulationReport:
        solver_mode = solver_mode or SolverMode.central()
        if T_sim < 1:
            raise ValueError("T_sim must be at least 1")
        if not isinstance(reference, ReferenceSignal):
            reference = ReferenceSignal.constant(reference)

        x = np.asarray(x_init, dtype=float).reshape(-1)
        instance = self._builder.build(variant, model, ingredients, x, reference.at(0))
        engine = None
        if solver_mode.kind is SolverModeKind.ADMM:
            engine = AdmmEngineImpl(self._solver, solver_mode.admm, self._jobs)

        logger.info(f"✓ Simulating {variant.value} ({solver_mode.kind.value}) for {T_sim} steps")
        states, steps = [x], []
        admm_state: AdmmState | None = None
        infeasible_at = None

        for t in range(T_sim):
            x_r = reference.at(t)
            instance.set_initial_state(x)
            instance.set_reference(x_r)
            try:
                if engine is None:
                    solution, history = self._central_step(instance), ()
                else:
                    if admm_state is not None and solver_mode.admm.warm_start:
                        admm_state = admm_state.shifted()
                    else:
                        admm_state = None
                    solution, report, admm_state = engine.run(instance, state=admm_state)
                    history = report.history
            except LocalInfeasibleError as e:
                logger.warning(f"✗ Step {t}: {e}")
                solution = None
            if solution is None:
                infeasible_at = t
                steps.append(StepRecord(step=t, x_init=x, x_r=x_r, status=SolveStatus.INFEASIBLE.value))
                break

            u = solution.first_input(model)
            steps.append(self._record(t, x, x_r, u, solution, history))
            x = model.propagate(x, u)
            states.append(x)
            logger.debug(f"Step {t}: cost {solution.objective:.6g}, applied |u|={np.linalg.norm(u):.3e}")

        cost, error = None, None
        if infeasible_at is None:
            inputs = [s.u_applied for s in steps]
            cost = closed_loop_cost(model, states, inputs, reference)
            error = float(np.max(np.abs(states[-1] - reference.at(T_sim))))
            logger.info(f"✓ {variant.value} closed loop: J_s={cost:.6g}, final error {error:.3e}")
        else:
            logger.warning(f"✗ {variant.value} closed loop halted at step {infeasible_at}")

        return SimulationReport(
            variant=variant,
            solver_mode=solver_mode.kind.value,
            budget_mode=solver_mode.admm.budget.label if solver_mode.admm else None,
            steps=tuple(steps),
            states=tuple(states),
            closed_loop_cost=cost,
            tracking_error=error,
            infeasible_at=infeasible_at,
        )

    def _central_step(self, instance: OcpInstance) -> TrajectorySolution | None:
        result = self._builder.solve_central(instance, self._solver)
        if result.status in (SolveStatus.INFEASIBLE, SolveStatus.UNBOUNDED) and not result.has_incumbent:
            return None
        return self._builder.extract_solution(result, instance)

    @staticmethod
    def _record(t, x, x_r, u, solution: TrajectorySolution, history) -> StepRecord:
        last = history[-1] if history else None
        return StepRecord(
            step=t,
            x_init=x,
            x_r=x_r,
            status=solution.status.value,
            u_applied=u,
            objective=solution.objective,
            wall_time=solution.wall_time,
            iterations=solution.iterations,
            primal_residual=last.primal_residual if last else None,
            dual_residual=last.dual_residual if last else None,
            alphas={i: s.terminal.alpha for i, s in solution.subsystems.items()},
            centers={i: s.terminal.c for i, s in solution.subsystems.items()},
            offsets={i: s.terminal.d for i, s in solution.subsystems.items()},
            center_offset=solution.center_offset(),
            admm_history=tuple(history),
        )

import logging
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from networkmodel.domain.model.aggregates.NetworkModel import NetworkModel
from optimization.domain.services.ConicSolver import ConicSolver
from mpc.application.internal.ocpservice.OcpBuilderImpl import OcpBuilderImpl
from mpc.application.internal.simulationservice.SimulationServiceImpl import SimulationServiceImpl
from mpc.domain.model.commands.BudgetSweepCommand import BudgetSweepCommand
from mpc.domain.model.commands.FeasibilityRegionCommand import FeasibilityRegionCommand
from mpc.domain.model.exceptions.MpcErrors import BudgetTooSmallError
from mpc.domain.model.value_objects.OcpVariant import OcpVariant
from mpc.domain.model.value_objects.RegionReport import RegionReport
from mpc.domain.model.value_objects.SolverMode import AdmmBudget, AdmmSettings, SolverMode
from mpc.domain.model.value_objects.SweepReport import SweepCell, SweepReport, SweepRow
from mpc.domain.services.TargetSampler import sample_initial_states, sample_targets
from terminal.domain.model.aggregates.TerminalIngredients import TerminalIngredients

logger = logging.getLogger(__name__)


def cell_problem(variant: OcpVariant, x_init: np.ndarray, target: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    (initial state, reference) of one sweep cell. The regulation baseline
    cannot track, so it starts at the target and returns to the origin.
    """
    if variant.tracks_reference:
        return x_init, target
    return target, np.zeros_like(target)


class StudyServiceImpl:
    """
    Experiments over many closed loops: the containment of feasible regions
    and the ADMM budget sweep. Independent cells run on a thread pool.
    """

    def __init__(self, builder: OcpBuilderImpl, solver: ConicSolver, jobs: int | None = None):
        self._builder = builder
        self._solver = solver
        self._jobs = jobs or os.cpu_count() or 1
        self._simulation = SimulationServiceImpl(builder, solver, jobs=1)

    # =========================================================================
    # FEASIBLE REGIONS
    # =========================================================================

    def execute_region(self, command: FeasibilityRegionCommand, model: NetworkModel,
                       ingredients: TerminalIngredients) -> RegionReport:
        rng = np.random.default_rng(command.seed)
        samples = sample_initial_states(model, command.n_samples, rng, command.radius)
        return self.feasibility_region_study(model, ingredients, command.variants, samples)

    def feasibility_region_study(
            self,
            model: NetworkModel,
            ingredients: TerminalIngredients,
            variants,
            samples,
    ) -> RegionReport:
        variants = tuple(variants)
        samples = tuple(np.asarray(x, dtype=float) for x in samples)
        logger.info(f"✓ Feasibility study over {len(samples)} initial states for {[v.value for v in variants]}")

        with ThreadPoolExecutor(max_workers=min(self._jobs, len(variants))) as pool:
            flags = dict(zip(variants, pool.map(lambda v: self._feasibility(model, ingredients, v, samples), variants)))

        violations, witnesses = (), ()
        if OcpVariant.DST in flags and OcpVariant.APP in flags:
            dst, app = flags[OcpVariant.DST], flags[OcpVariant.APP]
            violations = tuple(k for k in range(len(samples)) if app[k] and not dst[k])
            witnesses = tuple(k for k in range(len(samples)) if dst[k] and not app[k])
            if violations:
                logger.warning(f"✗ {len(violations)} samples feasible for APP but not for DST")

        report = RegionReport(samples=samples, feasible=flags, violations=violations, witnesses=witnesses)
        for v in variants:
            logger.info(f"{v.value}: {report.fraction(v):.3f} of samples feasible")
        return report

    def _feasibility(self, model, ingredients, variant: OcpVariant, samples) -> tuple[bool, ...]:
        zero = np.zeros(model.n_total)
        instance = self._builder.build(variant, model, ingredients, zero, zero)
        flags = []
        for x in samples:
            instance.set_initial_state(x)
            result = self._builder.solve_central(instance, self._solver)
            flags.append(result.status.is_feasible)
        return tuple(flags)

    # =========================================================================
    # BUDGET SWEEP
    # =========================================================================

    def execute_sweep(self, command: BudgetSweepCommand, model: NetworkModel,
                      ingredients: TerminalIngredients) -> SweepReport:
        rng = np.random.default_rng(command.seed)
        targets = [x_r for x_r, _ in sample_targets(model, command.n_targets, rng)]
        return self.budget_sweep(
            model, ingredients, command.variants, targets, command.budgets,
            T_sim=command.T_sim, rho=command.rho, warm_start=command.warm_start,
        )

    def budget_sweep(
            self,
            model: NetworkModel,
            ingredients: TerminalIngredients,
            variants,
            targets,
            budgets,
            T_sim: int = 10,
            rho: float = 1.0,
            warm_start: bool = True,
            x_init=None,
    ) -> SweepReport:
        if not targets:
            raise ValueError("A sweep needs at least one target")
        variants, budgets = tuple(variants), tuple(float(b) for b in budgets)
        x_init = np.zeros(model.n_total) if x_init is None else np.asarray(x_init, dtype=float)
        targets = [np.asarray(t, dtype=float) for t in targets]
        logger.info(
            f"✓ Budget sweep: {len(variants)} variants x {len(budgets)} budgets x {len(targets)} targets"
        )

        def central(key):
            variant, k = key
            start, reference = cell_problem(variant, x_init, targets[k])
            report = self._simulation.simulate(model, ingredients, variant, start, reference, T_sim)
            return report.closed_loop_cost

        def admm(key):
            variant, budget, k = key
            start, reference = cell_problem(variant, x_init, targets[k])
            mode = SolverMode.consensus(AdmmSettings(
                rho=rho, budget=AdmmBudget(max_time=budget), warm_start=warm_start,
            ))
            try:
                report = self._simulation.simulate(model, ingredients, variant, start, reference, T_sim, mode)
            except BudgetTooSmallError:
                return SweepCell(variant, budget, k, "budget_too_small")
            if not report.completed:
                return SweepCell(variant, budget, k, "infeasible", iterations=tuple(report.iteration_counts))
            report = report.with_suboptimality(central_costs[(variant, k)])
            return SweepCell(variant, budget, k, "ok", report.suboptimality, tuple(report.iteration_counts))

        central_keys = [(v, k) for v in variants for k in range(len(targets))]
        cell_keys = [(v, b, k) for v in variants for b in budgets for k in range(len(targets))]
        with ThreadPoolExecutor(max_workers=self._jobs) as pool:
            central_costs = dict(zip(central_keys, pool.map(central, central_keys)))
            cells = tuple(pool.map(admm, cell_keys))

        rows = []
        for v in variants:
            for b in budgets:
                done = [c for c in cells if c.variant is v and c.budget_s == b and c.status == "ok"]
                rows.append(SweepRow.of(b, v, "suboptimality", [c.suboptimality for c in done if c.suboptimality is not None]))
                rows.append(SweepRow.of(b, v, "iterations", [n for c in done for n in c.iterations]))
                logger.info(f"{v.value} @ {b:g}s: {len(done)}/{len(targets)} runs completed")
        return SweepReport(cells=cells, rows=tuple(rows), central_costs=central_costs)

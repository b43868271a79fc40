import json
import logging
import sys

import cvxpy as cp
import numpy as np
from pydantic import ValidationError

from networkmodel.domain.model.commands.DiscretizeNetworkCommand import DiscretizeNetworkCommand
from networkmodel.domain.model.exceptions.NetworkErrors import NetworkModelError
from networkmodel.domain.model.value_objects.ReferenceSignal import ReferenceSignal
from mpc.application.internal.pipelineservice.PipelineServiceImpl import PipelineServiceImpl
from mpc.domain.model.commands.BudgetSweepCommand import BudgetSweepCommand
from mpc.domain.model.commands.FeasibilityRegionCommand import FeasibilityRegionCommand
from mpc.domain.model.commands.SimulateCommand import SimulateCommand
from mpc.domain.model.exceptions.MpcErrors import (
    BudgetTooSmallError,
    DynamicsResidualError,
    IngredientMismatchError,
    InfeasibleAtStepError,
    LocalInfeasibleError,
    MpcError,
    NoIncumbentError,
    StepSizeError,
)
from mpc.domain.model.value_objects.SolverMode import AdmmBudget, AdmmSettings, SolverMode, SolverModeKind
from mpc.domain.services.TargetSampler import sample_target
from mpc.interface.cli.ArgumentParser import parse_config
from mpc.interface.cli.RunConfig import CliCommand, RunConfig
from optimization.domain.model.exceptions.OptimizationErrors import OptimizationError
from terminal.domain.model.commands.SynthesizeIngredientsCommand import SynthesizeIngredientsCommand
from terminal.domain.model.exceptions.TerminalErrors import SynthesisInfeasibleError, SynthesisNumericalError
from terminal.domain.services.InvarianceVerifier import invariance_check_montecarlo, verify_decrease

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3
EXIT_SOLVER = 4


def exit_code_for(error: Exception) -> int:
    """0 success, 2 config/schema, 3 runtime infeasibility, 4 solver failure"""
    if isinstance(error, (InfeasibleAtStepError, SynthesisInfeasibleError, LocalInfeasibleError)):
        return EXIT_INFEASIBLE
    if isinstance(error, (SynthesisNumericalError, NoIncumbentError, DynamicsResidualError, cp.SolverError)):
        return EXIT_SOLVER
    if isinstance(error, (ValidationError, NetworkModelError, IngredientMismatchError, BudgetTooSmallError,
                          StepSizeError, OptimizationError, MpcError, ValueError, FileNotFoundError)):
        return EXIT_CONFIG
    return EXIT_SOLVER


def _solver_mode(config: RunConfig) -> SolverMode:
    if config.solver_mode is SolverModeKind.CENTRAL:
        return SolverMode.central()
    return SolverMode.consensus(AdmmSettings(
        rho=config.rho,
        budget=AdmmBudget(max_iters=config.max_iters, max_time=config.max_time),
        residual_balancing=config.residual_balancing,
        warm_start=config.warm_start,
        tolerance=config.tolerance,
    ))


def _reference(config: RunConfig, model, rng: np.random.Generator | None) -> ReferenceSignal:
    if config.reference is not None:
        return ReferenceSignal.from_pairs([(s.start_time, s.x_r) for s in config.reference])
    if not config.variant.tracks_reference:
        return ReferenceSignal.constant(np.zeros(model.n_total))
    x_r, _ = sample_target(model, rng)
    logger.info(f"Random target drawn with seed {config.seed}")
    return ReferenceSignal.constant(x_r)


# =============================================================================
# COMMANDS
# =============================================================================

def cmd_synthesize(config: RunConfig, services: PipelineServiceImpl) -> int:
    ingredients = services.ingredients.synthesize(SynthesizeIngredientsCommand(
        output=config.output,
        network=config.network,
        epsilon=config.epsilon,
        lifting=config.lifting,
        sampling_time=config.h,
    ))
    logger.info(f"✓ Ingredients for {len(ingredients.subsystems)} subsystems written to {config.output}")
    return EXIT_OK


def cmd_discretize(config: RunConfig, services: PipelineServiceImpl) -> int:
    model = services.networks.discretize(DiscretizeNetworkCommand(
        source=config.network, target=config.output, h=config.h,
    ))
    logger.info(f"✓ Discrete network (h={model.sampling_time}) written to {config.output}")
    return EXIT_OK


def cmd_simulate(config: RunConfig, services: PipelineServiceImpl) -> int:
    model, ingredients = services.load_inputs(config.network, config.ingredients, config.h, config.epsilon, config.lifting)
    rng = np.random.default_rng(config.seed) if config.seed is not None else None
    reference = _reference(config, model, rng)
    x_init = np.zeros(model.n_total) if config.x_init is None else np.asarray(config.x_init, dtype=float)
    report = services.simulation.execute(
        SimulateCommand(
            variant=config.variant,
            x_init=tuple(float(v) for v in x_init),
            reference=reference,
            T_sim=config.T_sim,
            solver_mode=_solver_mode(config),
        ),
        model,
        ingredients,
    )
    services.reports.save_simulation(report, config.output)
    report.raise_for_status()
    return EXIT_OK


def cmd_sweep(config: RunConfig, services: PipelineServiceImpl) -> int:
    model, ingredients = services.load_inputs(config.network, config.ingredients, config.h, config.epsilon, config.lifting)
    report = services.studies.execute_sweep(
        BudgetSweepCommand(
            seed=config.seed,
            variants=tuple(config.variants),
            n_targets=config.n_targets,
            budgets=tuple(config.budgets),
            T_sim=config.T_sim,
            rho=config.rho,
            warm_start=config.warm_start,
        ),
        model,
        ingredients,
    )
    services.reports.save_sweep(report, config.output)
    return EXIT_OK


def cmd_region(config: RunConfig, services: PipelineServiceImpl) -> int:
    model, ingredients = services.load_inputs(config.network, config.ingredients, config.h, config.epsilon, config.lifting)
    report = services.studies.execute_region(
        FeasibilityRegionCommand(
            seed=config.seed,
            n_samples=config.n_samples,
            radius=config.radius,
            variants=tuple(config.variants),
        ),
        model,
        ingredients,
    )
    services.reports.save_region(report, config.output)
    return EXIT_OK


def cmd_verify(config: RunConfig, services: PipelineServiceImpl) -> int:
    """Lyapunov decrease on random states, then invariance of the terminal sets of one solved instance"""
    model, ingredients = services.load_inputs(config.network, config.ingredients, config.h, config.epsilon, config.lifting)
    rng = np.random.default_rng(config.seed)
    decrease = verify_decrease(model, ingredients, config.n_verify_samples, rng)

    reference = _reference(config, model, rng)
    x_init = np.zeros(model.n_total) if config.x_init is None else np.asarray(config.x_init, dtype=float)
    instance = services.builder.build(config.variant, model, ingredients, x_init, reference.at(0))
    solution = services.builder.extract_solution(services.builder.solve_central(instance), instance)
    params = solution.terminal_params()
    invariance = {
        i: invariance_check_montecarlo(instance.geometries[i], params, config.n_verify_samples, rng)
        for i in model.ids
    }

    summary = {
        "decrease": {
            "samples": decrease.n_samples,
            "violations": decrease.n_violations,
            "max_violation": float(f"{decrease.max_violation:.12g}"),
            "spectral_radius": float(f"{decrease.spectral_radius:.12g}"),
        },
        "invariance": {
            str(i): {
                "samples": r.n_samples,
                "successor_residual": float(f"{r.successor_residual:.12g}"),
                "state_residual": float(f"{r.state_residual:.12g}"),
                "input_residual": float(f"{r.input_residual:.12g}"),
                "holds": r.holds(),
            }
            for i, r in invariance.items()
        },
    }
    config.output.mkdir(parents=True, exist_ok=True)
    (config.output / "verify.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")

    if decrease.holds and all(r.holds() for r in invariance.values()):
        logger.info("✓ Offline and online certificates verified")
        return EXIT_OK
    logger.error("✗ Verification found violations")
    return EXIT_INFEASIBLE


def cmd_serve(config: RunConfig, services: PipelineServiceImpl) -> int:
    import uvicorn

    uvicorn.run("main:app", host=config.host, port=config.port, log_level="info")
    return EXIT_OK


HANDLERS = {
    CliCommand.SYNTHESIZE: cmd_synthesize,
    CliCommand.DISCRETIZE: cmd_discretize,
    CliCommand.SIMULATE: cmd_simulate,
    CliCommand.SWEEP: cmd_sweep,
    CliCommand.REGION: cmd_region,
    CliCommand.VERIFY: cmd_verify,
    CliCommand.SERVE: cmd_serve,
}


def run(argv: list[str] | None = None, services: PipelineServiceImpl | None = None) -> int:
    try:
        config = parse_config(argv)
        if config.command is not CliCommand.SERVE:
            services = services or PipelineServiceImpl(jobs=config.jobs)
        code = HANDLERS[config.command](config, services)
    except Exception as e:
        code = exit_code_for(e)
        step = f" (step {e.step})" if isinstance(e, InfeasibleAtStepError) else ""
        logger.error(f"✗ {type(e).__name__}{step}: {e}")
        print(f"error: {e}", file=sys.stderr)
    return code

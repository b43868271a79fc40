import logging

import cvxpy as cp
import numpy as np

from networkmodel.domain.model.aggregates.NetworkModel import NetworkModel
from optimization.domain.model.aggregates.ConicProgram import ConicProgram
from optimization.domain.model.value_objects.SolveResult import SolveResult
from optimization.domain.services.ConicSolver import ConicSolver
from mpc.domain.model.aggregates.OcpInstance import OcpInstance
from mpc.domain.model.exceptions.MpcErrors import IngredientMismatchError, NoIncumbentError
from mpc.domain.model.value_objects.DecisionBlocks import LocalBlock, SharedBlock
from mpc.domain.model.value_objects.OcpVariant import OcpVariant
from mpc.domain.model.value_objects.TrajectorySolution import TrajectorySolution
from mpc.domain.services.SolutionExtractor import solution_from_values
from mpc.domain.services.SubsystemProblemAssembler import SubsystemProblemAssembler
from terminal.domain.model.aggregates.TerminalIngredients import TerminalIngredients
from terminal.domain.services.TerminalGeometry import build_geometries

logger = logging.getLogger(__name__)


class OcpBuilderImpl:
    """
    Builds the online problems as ConicPrograms and extracts their solutions.
    DST carries one PSD invariance block per subsystem, DST_DD replaces it with
    diagonal-dominance rows (no PSD cone left) and APP is the regulation
    baseline with Schur-form terminal sets.
    """

    def __init__(self, solver: ConicSolver | None = None):
        self._solver = solver

    # =========================================================================
    # BUILDERS
    # =========================================================================

    def build_dst(self, model: NetworkModel, ingredients: TerminalIngredients, x_init, x_r) -> OcpInstance:
        return self.build(OcpVariant.DST, model, ingredients, x_init, x_r)

    def build_dst_dd(self, model: NetworkModel, ingredients: TerminalIngredients, x_init, x_r) -> OcpInstance:
        return self.build(OcpVariant.DST_DD, model, ingredients, x_init, x_r)

    def build_app(self, model: NetworkModel, ingredients: TerminalIngredients, x_init) -> OcpInstance:
        return self.build(OcpVariant.APP, model, ingredients, x_init, None)

    def build(self, variant: OcpVariant, model: NetworkModel, ingredients: TerminalIngredients,
              x_init, x_r=None) -> OcpInstance:
        mismatches = ingredients.mismatches(model)
        if mismatches:
            raise IngredientMismatchError("; ".join(mismatches))

        geometries = build_geometries(model, ingredients)
        shared = {j: SharedBlock.create(j, model.subsystem(j).n, model.T, variant) for j in model.ids}
        local = {
            i: LocalBlock.create(
                i, geo.n, geo.m, model.T, len(geo.neighbors), geo.q, geo.r, variant,
            )
            for i, geo in geometries.items()
        }
        x_init_params = {
            i: cp.Parameter(model.subsystem(i).n, name=f"x_init_{i}") for i in model.ids
        }
        x_r_params = {}
        if variant.tracks_reference:
            x_r_params = {i: cp.Parameter(model.subsystem(i).n, name=f"x_r_{i}") for i in model.ids}

        program = ConicProgram(name=f"ocp_{variant.value}")
        costs = []
        for i in model.ids:
            assembler = SubsystemProblemAssembler(model, geometries[i], variant)
            costs.append(assembler.assemble(program, shared, local[i], x_init_params[i], x_r_params.get(i)))
        program.set_objective(sum(costs[1:], costs[0]))

        instance = OcpInstance(
            variant=variant,
            model=model,
            ingredients=ingredients,
            geometries=geometries,
            program=program,
            shared=shared,
            local=local,
            x_init=x_init_params,
            x_r=x_r_params,
        )
        instance.set_initial_state(np.asarray(x_init, dtype=float))
        instance.set_reference(None if x_r is None else np.asarray(x_r, dtype=float))
        logger.debug(f"Built {instance} with {program}")
        return instance

    # =========================================================================
    # SOLVING
    # =========================================================================

    def solve_central(self, instance: OcpInstance, solver: ConicSolver | None = None) -> SolveResult:
        solver = solver or self._solver
        if solver is None:
            raise ValueError("No conic solver configured")
        return solver.solve(instance.program)

    def extract_solution(self, result: SolveResult, instance: OcpInstance) -> TrajectorySolution:
        if not result.has_incumbent:
            raise NoIncumbentError(f"{instance.program.name} ended {result.status.value} without a primal point")
        return solution_from_values(
            instance,
            result.values,
            result.status,
            strict=True,
            wall_time=result.stats.wall_time,
            iterations=result.stats.iterations,
        )

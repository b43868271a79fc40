import numpy as np

from networkmodel.domain.model.aggregates.NetworkModel import NetworkModel
from networkmodel.domain.model.value_objects.ReferenceSignal import ReferenceSignal
from networkmodel.infrastructure.persistence.repositories.NetworkRepositoryImpl import NetworkRepositoryImpl
from networkmodel.infrastructure.persistence.resources.NetworkFileResource import NetworkFileResource
from mpc.domain.model.commands.SimulateCommand import SimulateCommand
from mpc.domain.model.value_objects.SimulationReport import SimulationReport
from mpc.domain.model.value_objects.SolverMode import AdmmBudget, AdmmSettings, SolverMode, SolverModeKind
from mpc.domain.services.TargetSampler import sample_target
from mpc.interface.api.rest.resources.SimulationRequestResource import SimulationRequest
from mpc.interface.api.rest.resources.SimulationResponseResource import SimulationResponse, StepResponse
from mpc.interface.api.rest.resources.SynthesisResponseResource import SynthesisResponse
from terminal.domain.model.aggregates.TerminalIngredients import TerminalIngredients
from terminal.infrastructure.persistence.repositories.IngredientsRepositoryImpl import IngredientsRepositoryImpl


def _floats(values) -> list[float]:
    return [float(v) for v in np.ravel(values)]


class MpcResourceAssembler:
    """
    Assembler to transform between presentation and domain layers
    Transformations: Resource ↔ Command / Aggregate
    """

    # =========================================================================
    # Resource → Domain
    # =========================================================================

    @staticmethod
    def to_network(resource: NetworkFileResource) -> NetworkModel:
        return NetworkRepositoryImpl.to_model(resource)

    @staticmethod
    def to_ingredients(resource) -> TerminalIngredients:
        return IngredientsRepositoryImpl.to_aggregate(resource)

    @staticmethod
    def to_simulate_command(request: SimulationRequest, model: NetworkModel) -> SimulateCommand:
        if request.reference is not None:
            reference = ReferenceSignal.from_pairs([(s.start_time, s.x_r) for s in request.reference])
        elif request.variant.tracks_reference:
            x_r, _ = sample_target(model, np.random.default_rng(request.seed))
            reference = ReferenceSignal.constant(x_r)
        else:
            reference = ReferenceSignal.constant(np.zeros(model.n_total))

        mode = SolverMode.central()
        if request.solver_mode is SolverModeKind.ADMM:
            budget = AdmmBudget(
                max_iters=request.max_iters if request.max_iters or request.max_time else 200,
                max_time=request.max_time,
            )
            mode = SolverMode.consensus(AdmmSettings(rho=request.rho, budget=budget))

        x_init = request.x_init if request.x_init is not None else [0.0] * model.n_total
        return SimulateCommand(
            variant=request.variant,
            x_init=tuple(float(v) for v in x_init),
            reference=reference,
            T_sim=request.T_sim,
            solver_mode=mode,
        )

    # =========================================================================
    # Domain → Resource
    # =========================================================================

    @staticmethod
    def to_network_resource(model: NetworkModel) -> NetworkFileResource:
        return NetworkRepositoryImpl.to_resource(model)

    @staticmethod
    def to_synthesis_response(ingredients: TerminalIngredients, model: NetworkModel) -> SynthesisResponse:
        spectral_radius = float(np.max(np.abs(np.linalg.eigvals(ingredients.closed_loop(model)))))
        return SynthesisResponse(
            ingredients=IngredientsRepositoryImpl.to_resource(ingredients),
            spectral_radius=spectral_radius,
            objective=ingredients.certificate.objective if ingredients.certificate else None,
        )

    @staticmethod
    def to_simulation_response(report: SimulationReport) -> SimulationResponse:
        return SimulationResponse(
            variant=report.variant.value,
            solver_mode=report.solver_mode,
            budget_mode=report.budget_mode,
            completed=report.completed,
            infeasible_at=report.infeasible_at,
            closed_loop_cost=report.closed_loop_cost,
            tracking_error=report.tracking_error,
            steps=[
                StepResponse(
                    step=s.step,
                    status=s.status,
                    x_init=_floats(s.x_init),
                    x_r=_floats(s.x_r),
                    u_applied=_floats(s.u_applied) if s.u_applied is not None else None,
                    objective=s.objective,
                    iterations=s.iterations,
                    alphas={str(i): float(a) for i, a in s.alphas.items()},
                    center_offset=s.center_offset,
                )
                for s in report.steps
            ],
        )

import logging

from fastapi import APIRouter, Depends, HTTPException

from mpc.application.internal.pipelineservice.PipelineServiceImpl import PipelineServiceImpl, get_pipeline_service
from mpc.interface.api.rest.assemblers.MpcResourceAssembler import MpcResourceAssembler
from mpc.interface.api.rest.resources.SimulationRequestResource import SimulationRequest
from mpc.interface.api.rest.resources.SimulationResponseResource import SimulationResponse
from terminal.domain.model.exceptions.TerminalErrors import SynthesisInfeasibleError

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/api/v1/simulations", tags=["Simulations"])


@router.post(
    "",
    response_model=SimulationResponse,
    summary="Run a closed loop",
    description="Receding-horizon simulation with central or ADMM solves. "
                "A run that becomes infeasible is returned with completed=false.",
    responses={
        200: {"description": "Simulation finished or halted at an infeasible step"},
        400: {"description": "Invalid request or business rule violation"},
        409: {"description": "Terminal synthesis infeasible"},
        500: {"description": "Internal server error"}
    }
)
def simulate(request: SimulationRequest, services: PipelineServiceImpl = Depends(get_pipeline_service)):
    try:
        if request.network is None:
            model = services.networks.load_discrete(None, None)
        else:
            model = services.networks.to_discrete(MpcResourceAssembler.to_network(request.network))

        if request.ingredients is None:
            ingredients = services.synthesis.synthesize(model)
        else:
            ingredients = MpcResourceAssembler.to_ingredients(request.ingredients)

        command = MpcResourceAssembler.to_simulate_command(request, model)
        report = services.simulation.execute(command, model, ingredients)
        return MpcResourceAssembler.to_simulation_response(report)

    except HTTPException:
        raise
    except SynthesisInfeasibleError as e:
        raise HTTPException(status_code=409, detail=str(e))
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        logger.error(f"Simulation failed: {e}")
        raise HTTPException(status_code=500, detail=f"Internal error: {str(e)}")

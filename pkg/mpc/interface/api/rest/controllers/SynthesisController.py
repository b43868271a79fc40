import logging

from fastapi import APIRouter, Depends, HTTPException

from mpc.application.internal.pipelineservice.PipelineServiceImpl import PipelineServiceImpl, get_pipeline_service
from mpc.interface.api.rest.assemblers.MpcResourceAssembler import MpcResourceAssembler
from mpc.interface.api.rest.resources.SynthesisRequestResource import SynthesisRequest
from mpc.interface.api.rest.resources.SynthesisResponseResource import SynthesisResponse
from terminal.domain.model.exceptions.TerminalErrors import SynthesisInfeasibleError

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/api/v1/synthesis", tags=["Synthesis"])


@router.post(
    "",
    response_model=SynthesisResponse,
    summary="Synthesize terminal ingredients",
    description="Solve the offline program for terminal costs P_i and gains K_i.",
    responses={
        200: {"description": "Ingredients synthesized"},
        400: {"description": "Invalid network"},
        409: {"description": "Synthesis program infeasible"},
        500: {"description": "Internal server error"}
    }
)
def synthesize(request: SynthesisRequest, services: PipelineServiceImpl = Depends(get_pipeline_service)):
    """
    Synthesize terminal ingredients

    - **network**: network file content; the benchmark when omitted
    - **epsilon**: lower bound on E_i
    - **sampling_time**: used when the network is continuous
    """
    try:
        if request.network is None:
            model = services.networks.load_discrete(None, request.sampling_time)
        else:
            model = services.networks.to_discrete(
                MpcResourceAssembler.to_network(request.network), request.sampling_time,
            )
        ingredients = services.synthesis.synthesize(model, request.epsilon, request.lifting)
        return MpcResourceAssembler.to_synthesis_response(ingredients, model)

    except SynthesisInfeasibleError as e:
        raise HTTPException(status_code=409, detail=str(e))
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        logger.error(f"Synthesis failed: {e}")
        raise HTTPException(status_code=500, detail=f"Internal error: {str(e)}")

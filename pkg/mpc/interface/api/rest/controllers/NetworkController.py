from fastapi import APIRouter, Depends, HTTPException

from networkmodel.infrastructure.persistence.resources.NetworkFileResource import NetworkFileResource
from mpc.application.internal.pipelineservice.PipelineServiceImpl import PipelineServiceImpl, get_pipeline_service
from mpc.interface.api.rest.assemblers.MpcResourceAssembler import MpcResourceAssembler

router = APIRouter(prefix="/api/v1/networks", tags=["Networks"])


@router.get(
    "/benchmark",
    response_model=NetworkFileResource,
    summary="Seven-area power network",
    description="The bundled continuous-time benchmark network in the network file format.",
    responses={
        200: {"description": "Benchmark network"},
        500: {"description": "Internal server error"}
    }
)
def get_benchmark(services: PipelineServiceImpl = Depends(get_pipeline_service)):
    try:
        model = services.network_repository.load_benchmark()
        return MpcResourceAssembler.to_network_resource(model)
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Internal error: {str(e)}")

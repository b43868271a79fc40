import logging
import sys
from contextlib import asynccontextmanager

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from mpc.interface.api.rest.controllers.NetworkController import router as network_router
from mpc.interface.api.rest.controllers.SimulationController import router as simulation_router
from mpc.interface.api.rest.controllers.SynthesisController import router as synthesis_router
from mpc.interface.cli.CommandHandlers import run
from shared.infrastructure.configuration.solver_configuration import load_solver_settings


"""
Configure logs
"""
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)


@asynccontextmanager
async def lifespan(_: FastAPI):
    """
    Application lifecycle management.
    Validates the solver settings before accepting requests.
    """
    logger.info("Starting distributed MPC API...")
    try:
        settings = load_solver_settings()
        logger.info(f"Solver backend {settings.solver}, {settings.jobs} worker threads")
    except ValueError as e:
        logger.error(f"Invalid solver settings: {e}")
        raise

    logger.info("Distributed MPC API is ready to accept requests.")
    yield
    logger.info("Distributed MPC API stopped.")


"""
Create FastAPI application
"""
app = FastAPI(
    title="Distributed Tracking MPC API",
    description="Terminal ingredient synthesis and closed-loop simulation of distributed tracking MPC.",
    version="1.0.0",
    lifespan=lifespan,
)

"""
CORS middleware configuration
"""
app.add_middleware(
    CORSMiddleware, # type: ignore
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

"""
Include routers from bounded contexts
"""
app.include_router(network_router)      # /api/v1/networks/*
app.include_router(synthesis_router)    # /api/v1/synthesis
app.include_router(simulation_router)   # /api/v1/simulations


@app.get("/", tags=["Root"])
async def root():
    """Root endpoint with API information"""
    return {
        "service": "Distributed Tracking MPC",
        "status": "running",
        "documentation": {
            "swagger_ui": "/docs",
            "redoc": "/redoc",
            "openapi_spec": "/openapi.json"
        }
    }


@app.get("/health", tags=["Health"])
async def health_check():
    """Health check endpoint for monitoring"""
    return {
        "status": "healthy",
        "service": "dmpc"
    }


"""
Command line: python main.py <command> [options]
"""
if __name__ == "__main__":
    try:
        logging.getLogger().setLevel(load_solver_settings().log_level)
    except ValueError as e:
        logger.error(f"✗ {e}")
        sys.exit(2)
    sys.exit(run(sys.argv[1:]))

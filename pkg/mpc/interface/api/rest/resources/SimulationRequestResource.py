from pydantic import BaseModel, Field, model_validator

from networkmodel.infrastructure.persistence.resources.NetworkFileResource import NetworkFileResource
from mpc.domain.model.value_objects.OcpVariant import OcpVariant
from mpc.domain.model.value_objects.SolverMode import SolverModeKind
from mpc.interface.cli.RunConfig import ReferenceSegmentResource
from terminal.infrastructure.persistence.resources.IngredientsFileResource import IngredientsFileResource


class SimulationRequest(BaseModel):
    """DTO for a closed-loop simulation request"""
    variant: OcpVariant = Field(OcpVariant.DST, description="DST, DST_DD or APP")
    network: NetworkFileResource | None = Field(None, description="The benchmark when omitted")
    ingredients: IngredientsFileResource | None = Field(None, description="Synthesized first when omitted")
    x_init: list[float] | None = Field(None, description="Initial global state; zero when omitted")
    reference: list[ReferenceSegmentResource] | None = Field(None, description="Piecewise-constant x_r")
    seed: int | None = Field(None, ge=0, description="Draws a random target when no reference is given")
    T_sim: int = Field(10, ge=1, le=200)
    solver_mode: SolverModeKind = SolverModeKind.CENTRAL
    rho: float | None = Field(None, gt=0)
    max_iters: int | None = Field(None, ge=1)
    max_time: float | None = Field(None, gt=0)

    @model_validator(mode='after')
    def check_mode(self) -> 'SimulationRequest':
        if self.solver_mode is SolverModeKind.ADMM and self.rho is None:
            raise ValueError('admm mode needs rho')
        if self.reference is None and self.variant.tracks_reference and self.seed is None:
            raise ValueError('give a reference or a seed to draw one')
        return self

    model_config = {
        "json_schema_extra": {
            "examples": [
                {"variant": "DST", "seed": 3, "T_sim": 10, "solver_mode": "central"}
            ]
        }
    }

from pydantic import BaseModel, Field

from networkmodel.infrastructure.persistence.resources.NetworkFileResource import NetworkFileResource
from terminal.domain.model.value_objects.LmiLifting import LmiLifting


class SynthesisRequest(BaseModel):
    """DTO for an offline synthesis request"""
    network: NetworkFileResource | None = Field(None, description="Network to synthesize for; the benchmark when omitted")
    epsilon: float = Field(1e-6, gt=0, description="Lower bound on the eigenvalues of E_i")
    lifting: LmiLifting = Field(LmiLifting.OWN_BLOCK, description="First block of the synthesis LMI")
    sampling_time: float | None = Field(None, gt=0, description="Discretization step for continuous networks")

    model_config = {
        "json_schema_extra": {
            "examples": [
                {"network": None, "epsilon": 1e-6, "lifting": "own_block", "sampling_time": 1.0}
            ]
        }
    }

from pydantic import BaseModel, Field

from terminal.domain.model.value_objects.LmiLifting import LmiLifting


class SubsystemIngredientsResource(BaseModel):
    """Terminal cost and gain of one subsystem"""
    id: int = Field(..., ge=1)
    P: list[list[float]] = Field(..., description="Terminal cost, n x n")
    K: list[list[float]] = Field(..., description="Terminal gain, m x n_N")
    epsilon: float = Field(1e-6, gt=0)


class SubsystemCertificateResource(BaseModel):
    """Synthesis variables and LMI slacks of one subsystem"""
    id: int = Field(..., ge=1)
    E: list[list[float]]
    Y: list[list[float]]
    Gamma: list[list[float]]
    Theta: dict[str, list[list[float]]] = Field(..., description="Blocks keyed by neighbor id")
    lmi_min_eigenvalue: float
    relaxation_min_eigenvalue: float
    coupling_max_eigenvalue: float


class CertificateResource(BaseModel):
    lifting: LmiLifting
    objective: float
    solver: str
    subsystems: list[SubsystemCertificateResource]


class IngredientsFileResource(BaseModel):
    """Schema of a terminal ingredients JSON file"""
    subsystems: list[SubsystemIngredientsResource] = Field(..., min_length=1)
    certificate: CertificateResource | None = None

    model_config = {
        "json_schema_extra": {
            "examples": [
                {
                    "subsystems": [{"id": 1, "P": [[2.1]], "K": [[-0.45]], "epsilon": 1e-6}],
                    "certificate": None
                }
            ]
        }
    }

from pydantic import BaseModel, Field, field_validator, model_validator


def _rectangular(rows: list[list[float]]) -> list[list[float]]:
    if len({len(r) for r in rows}) > 1:
        raise ValueError("matrix rows must all have the same length")
    return rows


class SubsystemFileResource(BaseModel):
    """One subsystem entry of a network file (dense row-major matrices)"""
    id: int = Field(..., ge=1, description="1-based subsystem index")
    n: int = Field(..., ge=1, description="State dimension")
    m: int = Field(..., ge=1, description="Input dimension")
    A: list[list[float]] = Field(..., description="n x n_N neighborhood dynamics")
    B: list[list[float]] = Field(..., description="n x m input matrix")
    G: list[list[float]] = Field(default_factory=list, description="State polytope rows over the neighborhood")
    g: list[float] = Field(default_factory=list)
    Hc: list[list[float]] = Field(default_factory=list, description="Input polytope rows")
    hc: list[float] = Field(default_factory=list)
    Q: list[list[float]] = Field(..., description="Neighborhood stage weight")
    R: list[list[float]] = Field(..., description="Input weight")
    S: list[list[float]] = Field(..., description="Reference offset weight")

    @field_validator('A', 'B', 'G', 'Hc', 'Q', 'R', 'S')
    @classmethod
    def rows_have_equal_length(cls, v: list[list[float]]) -> list[list[float]]:
        return _rectangular(v)


class NetworkFileResource(BaseModel):
    """Schema of a network JSON file"""
    subsystems: list[SubsystemFileResource] = Field(..., min_length=1)
    neighbors: list[list[int]] = Field(..., description="Neighbor ids per subsystem, ascending, self included")
    horizon: int = Field(..., ge=1, description="Prediction horizon T")
    continuous: bool = Field(False, description="True for continuous-time dynamics")
    sampling_time: float | None = Field(None, gt=0, description="Intended sampling time for continuous models")

    @model_validator(mode='after')
    def one_neighbor_list_per_subsystem(self) -> 'NetworkFileResource':
        if len(self.neighbors) != len(self.subsystems):
            raise ValueError('neighbors must hold one list per subsystem')
        return self

    model_config = {
        "json_schema_extra": {
            "examples": [
                {
                    "subsystems": [
                        {"id": 1, "n": 1, "m": 1, "A": [[0.5]], "B": [[1.0]],
                         "G": [[1.0], [-1.0]], "g": [5.0, 5.0], "Hc": [[1.0], [-1.0]], "hc": [2.0, 2.0],
                         "Q": [[1.0]], "R": [[1.0]], "S": [[10.0]]}
                    ],
                    "neighbors": [[1]],
                    "horizon": 5,
                    "continuous": False,
                    "sampling_time": None
                }
            ]
        }
    }

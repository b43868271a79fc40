from pydantic import BaseModel, Field

from terminal.infrastructure.persistence.resources.IngredientsFileResource import IngredientsFileResource


class SynthesisResponse(BaseModel):
    """DTO for synthesized terminal ingredients"""
    ingredients: IngredientsFileResource
    spectral_radius: float = Field(..., description="Spectral radius of the global closed loop under K")
    objective: float | None = Field(None, description="Optimal value of the synthesis program")

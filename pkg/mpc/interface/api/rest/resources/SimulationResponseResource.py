from pydantic import BaseModel, Field


class StepResponse(BaseModel):
    """DTO for one sampling instant"""
    step: int
    status: str
    x_init: list[float]
    x_r: list[float]
    u_applied: list[float] | None = None
    objective: float | None = None
    iterations: int | None = None
    alphas: dict[str, float] = Field(default_factory=dict)
    center_offset: float | None = None


class SimulationResponse(BaseModel):
    """DTO for a closed-loop run"""
    variant: str
    solver_mode: str
    budget_mode: str | None = None
    completed: bool
    infeasible_at: int | None = None
    closed_loop_cost: float | None = Field(None, description="J_s")
    tracking_error: float | None = Field(None, description="||x(T_sim) - x_r||_inf")
    steps: list[StepResponse]

from enum import Enum
from pathlib import Path

from pydantic import BaseModel, Field, field_validator, model_validator

from mpc.domain.model.commands.BudgetSweepCommand import DEFAULT_BUDGETS
from mpc.domain.model.value_objects.OcpVariant import OcpVariant
from mpc.domain.model.value_objects.SolverMode import SolverModeKind
from terminal.domain.model.value_objects.LmiLifting import LmiLifting


class CliCommand(str, Enum):
    SYNTHESIZE = "synthesize"
    DISCRETIZE = "discretize"
    SIMULATE = "simulate"
    SWEEP = "sweep"
    REGION = "region"
    VERIFY = "verify"
    SERVE = "serve"


RANDOMIZED = {CliCommand.SWEEP, CliCommand.REGION, CliCommand.VERIFY}


class ReferenceSegmentResource(BaseModel):
    start_time: int = Field(..., ge=0, description="First step at which x_r applies")
    x_r: list[float] = Field(..., min_length=1)


class RunConfig(BaseModel):
    """
    Schema of one CLI run. Built from flags, optionally on top of a JSON file
    given with --config.
    """
    command: CliCommand
    network: Path | None = Field(None, description="Network JSON; the bundled benchmark when omitted")
    ingredients: Path | None = Field(None, description="Ingredients JSON; synthesized on the fly when omitted")
    output: Path = Field(Path("out"), description="Output file (synthesize, discretize) or directory")
    variant: OcpVariant = OcpVariant.DST
    variants: list[OcpVariant] = Field(default_factory=lambda: [OcpVariant.DST, OcpVariant.DST_DD, OcpVariant.APP])
    solver_mode: SolverModeKind = SolverModeKind.CENTRAL
    rho: float | None = Field(None, gt=0, description="ADMM step size")
    max_iters: int | None = Field(None, ge=1)
    max_time: float | None = Field(None, gt=0, description="ADMM wall-clock budget per step, seconds")
    residual_balancing: bool = False
    warm_start: bool = True
    tolerance: float | None = Field(None, gt=0)
    seed: int | None = Field(None, ge=0)
    T_sim: int = Field(10, ge=1)
    x_init: list[float] | None = None
    reference: list[ReferenceSegmentResource] | None = None
    n_samples: int = Field(500, ge=1, description="Initial states of the feasibility study")
    n_verify_samples: int = Field(10_000, ge=1)
    radius: float = Field(0.1, gt=0, description="Half-width of the initial-state sampling box")
    n_targets: int = Field(25, description="Random targets of a sweep")
    budgets: list[float] = Field(default_factory=lambda: list(DEFAULT_BUDGETS))
    epsilon: float = Field(1e-6, gt=0)
    lifting: LmiLifting = LmiLifting.OWN_BLOCK
    h: float | None = Field(None, gt=0, description="Sampling time for discretization")
    jobs: int | None = Field(None, ge=1)
    host: str = "0.0.0.0"
    port: int = Field(8000, ge=1, le=65535)

    @field_validator('budgets')
    @classmethod
    def budgets_positive(cls, v: list[float]) -> list[float]:
        if not v or any(b <= 0 for b in v):
            raise ValueError('budgets must be a nonempty list of positive seconds')
        return v

    @model_validator(mode='after')
    def check_combinations(self) -> 'RunConfig':
        randomized = self.command in RANDOMIZED or (
            self.command is CliCommand.SIMULATE and self.reference is None and self.variant.tracks_reference
        )
        if randomized and self.seed is None:
            raise ValueError(f"'{self.command.value}' draws random samples and needs --seed")
        if self.solver_mode is SolverModeKind.ADMM and self.rho is None:
            raise ValueError("admm mode needs --rho")
        if self.command is CliCommand.SWEEP:
            if self.n_targets < 1:
                raise ValueError("a sweep needs at least one target")
            if self.rho is None:
                raise ValueError("a sweep runs ADMM and needs --rho")
        if self.command is CliCommand.DISCRETIZE and self.network is None:
            raise ValueError("discretize needs --network")
        if self.solver_mode is SolverModeKind.ADMM and self.max_iters is None and self.max_time is None:
            self.max_iters = 200
        return self

    model_config = {
        "json_schema_extra": {
            "examples": [
                {
                    "command": "simulate",
                    "variant": "DST",
                    "solver_mode": "admm",
                    "rho": 1.0,
                    "max_time": 0.4,
                    "seed": 7,
                    "T_sim": 10,
                    "output": "runs/dst_admm"
                }
            ]
        }
    }

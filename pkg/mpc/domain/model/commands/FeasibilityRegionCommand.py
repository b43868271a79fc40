from dataclasses import dataclass

from mpc.domain.model.value_objects.OcpVariant import OcpVariant


@dataclass(frozen=True)
class FeasibilityRegionCommand:
    """Command: compare feasible initial states of the regulation problems"""
    seed: int
    n_samples: int = 500
    radius: float = 0.1
    variants: tuple[OcpVariant, ...] = (OcpVariant.DST, OcpVariant.DST_DD, OcpVariant.APP)

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError("n_samples must be at least 1")
        if not self.radius > 0:
            raise ValueError("radius must be positive")

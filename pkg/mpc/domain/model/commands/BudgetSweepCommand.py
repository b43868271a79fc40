from dataclasses import dataclass

from mpc.domain.model.value_objects.OcpVariant import OcpVariant

DEFAULT_BUDGETS = tuple(round(0.2 * r, 10) for r in range(1, 11))


@dataclass(frozen=True)
class BudgetSweepCommand:
    """Command: ADMM closed loops over random targets for each wall-clock budget"""
    seed: int
    variants: tuple[OcpVariant, ...] = (OcpVariant.DST, OcpVariant.DST_DD, OcpVariant.APP)
    n_targets: int = 25
    budgets: tuple[float, ...] = DEFAULT_BUDGETS
    T_sim: int = 10
    rho: float = 1.0
    warm_start: bool = True

    def __post_init__(self):
        if self.n_targets < 1:
            raise ValueError("A sweep needs at least one target")
        if not self.budgets or any(b <= 0 for b in self.budgets):
            raise ValueError("Budgets must be a nonempty list of positive seconds")

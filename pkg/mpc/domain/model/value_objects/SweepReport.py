from dataclasses import dataclass

import numpy as np

from mpc.domain.model.value_objects.OcpVariant import OcpVariant


@dataclass(frozen=True)
class SweepCell:
    """One (variant, budget, target) closed-loop run"""
    variant: OcpVariant
    budget_s: float
    target: int
    status: str
    suboptimality: float | None = None
    iterations: tuple[int, ...] = ()


@dataclass(frozen=True)
class SweepRow:
    """Distribution of one metric across targets (and steps, for iterations)"""
    budget_s: float
    variant: OcpVariant
    metric: str
    count: int
    median: float
    q25: float
    q75: float
    min: float
    max: float

    @classmethod
    def of(cls, budget_s: float, variant: OcpVariant, metric: str, values) -> "SweepRow":
        values = np.asarray(list(values), dtype=float)
        if values.size == 0:
            nan = float("nan")
            return cls(budget_s, variant, metric, 0, nan, nan, nan, nan, nan)
        q25, median, q75 = np.percentile(values, [25, 50, 75])
        return cls(
            budget_s=budget_s,
            variant=variant,
            metric=metric,
            count=int(values.size),
            median=float(median),
            q25=float(q25),
            q75=float(q75),
            min=float(values.min()),
            max=float(values.max()),
        )


@dataclass(frozen=True)
class SweepReport:
    """Value Object: budget sweep cells and their per-(variant, budget) statistics"""
    cells: tuple[SweepCell, ...]
    rows: tuple[SweepRow, ...]
    central_costs: dict[tuple[OcpVariant, int], float | None]

    def row(self, variant: OcpVariant, budget_s: float, metric: str) -> SweepRow:
        for row in self.rows:
            if row.variant is variant and row.budget_s == budget_s and row.metric == metric:
                return row
        raise KeyError((variant, budget_s, metric))

    def excluded(self) -> list[SweepCell]:
        return [c for c in self.cells if c.status != "ok"]

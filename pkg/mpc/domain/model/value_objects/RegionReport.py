from dataclasses import dataclass

import numpy as np

from mpc.domain.model.value_objects.OcpVariant import OcpVariant


@dataclass(frozen=True, eq=False)
class RegionReport:
    """
    Value Object: feasibility of sampled initial states per variant
    violations are samples feasible for APP but not for DST; witnesses the
    reverse (DST strictly larger)
    """
    samples: tuple[np.ndarray, ...]
    feasible: dict[OcpVariant, tuple[bool, ...]]
    violations: tuple[int, ...]
    witnesses: tuple[int, ...]

    @property
    def contained(self) -> bool:
        return not self.violations

    def fraction(self, variant: OcpVariant) -> float:
        flags = self.feasible[variant]
        return sum(flags) / len(flags) if flags else 0.0

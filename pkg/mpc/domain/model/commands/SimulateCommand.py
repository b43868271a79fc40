from dataclasses import dataclass

from networkmodel.domain.model.value_objects.ReferenceSignal import ReferenceSignal
from mpc.domain.model.value_objects.OcpVariant import OcpVariant
from mpc.domain.model.value_objects.SolverMode import SolverMode


@dataclass(frozen=True)
class SimulateCommand:
    """Command: run the receding-horizon loop from x_init"""
    variant: OcpVariant
    x_init: tuple[float, ...]
    reference: ReferenceSignal
    T_sim: int = 10
    solver_mode: SolverMode = SolverMode.central()

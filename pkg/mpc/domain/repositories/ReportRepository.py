from pathlib import Path
from typing import Protocol

from mpc.domain.model.value_objects.RegionReport import RegionReport
from mpc.domain.model.value_objects.SimulationReport import SimulationReport
from mpc.domain.model.value_objects.SweepReport import SweepReport


class ReportRepository(Protocol):
    """Writes experiment outputs as CSV tables and JSON summaries"""

    def save_simulation(self, report: SimulationReport, directory: Path) -> list[Path]:
        ...

    def save_sweep(self, report: SweepReport, directory: Path) -> list[Path]:
        ...

    def save_region(self, report: RegionReport, directory: Path) -> list[Path]:
        ...

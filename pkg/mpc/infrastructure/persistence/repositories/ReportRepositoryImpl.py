import json
import logging
from pathlib import Path

import numpy as np
import pandas as pd

from mpc.domain.model.value_objects.RegionReport import RegionReport
from mpc.domain.model.value_objects.SimulationReport import SimulationReport
from mpc.domain.model.value_objects.SweepReport import SweepReport

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.12g"
HISTORY_COLUMNS = ["timestep", "iteration", "primal_residual", "dual_residual", "elapsed_s"]
SWEEP_COLUMNS = ["budget_s", "variant", "metric", "median", "q25", "q75", "min", "max", "count"]


def _number(value):
    """JSON-safe float with 12 significant digits, None for missing or NaN"""
    if value is None:
        return None
    value = float(value)
    if not np.isfinite(value):
        return None
    return float(f"{value:.12g}")


class ReportRepositoryImpl:
    """
    CSV tables (12 significant digits, '\\n' line endings, no index) and JSON
    summaries so runs with the same seed produce identical files.
    """

    # =========================================================================
    # TABLES
    # =========================================================================

    @staticmethod
    def trace_frame(report: SimulationReport) -> pd.DataFrame:
        rows = []
        for s in report.steps:
            row = {
                "timestep": s.step,
                "status": s.status,
                "objective": s.objective,
                "iterations": s.iterations,
                "primal_residual": s.primal_residual,
                "dual_residual": s.dual_residual,
                "center_offset": s.center_offset,
            }
            row.update({f"x_{k}": v for k, v in enumerate(s.x_init)})
            row.update({f"x_r_{k}": v for k, v in enumerate(s.x_r)})
            if s.u_applied is not None:
                row.update({f"u_{k}": v for k, v in enumerate(s.u_applied)})
            row.update({f"alpha_{i}": a for i, a in s.alphas.items()})
            rows.append(row)
        return pd.DataFrame(rows)

    @staticmethod
    def history_frame(report: SimulationReport) -> pd.DataFrame:
        rows = [
            {
                "timestep": s.step,
                "iteration": r.iteration,
                "primal_residual": r.primal_residual,
                "dual_residual": r.dual_residual,
                "elapsed_s": r.elapsed_s,
            }
            for s in report.steps
            for r in s.admm_history
        ]
        return pd.DataFrame(rows, columns=HISTORY_COLUMNS)

    @staticmethod
    def sweep_frame(report: SweepReport) -> pd.DataFrame:
        rows = [
            {
                "budget_s": r.budget_s,
                "variant": r.variant.value,
                "metric": r.metric,
                "median": r.median,
                "q25": r.q25,
                "q75": r.q75,
                "min": r.min,
                "max": r.max,
                "count": r.count,
            }
            for r in report.rows
        ]
        return pd.DataFrame(rows, columns=SWEEP_COLUMNS)

    @staticmethod
    def cells_frame(report: SweepReport) -> pd.DataFrame:
        rows = [
            {
                "variant": c.variant.value,
                "budget_s": c.budget_s,
                "target": c.target,
                "status": c.status,
                "suboptimality": c.suboptimality,
                "median_iterations": float(np.median(c.iterations)) if c.iterations else None,
            }
            for c in report.cells
        ]
        return pd.DataFrame(rows)

    @staticmethod
    def region_frame(report: RegionReport) -> pd.DataFrame:
        rows = []
        for k, x in enumerate(report.samples):
            row = {"sample": k}
            row.update({f"x_{n}": v for n, v in enumerate(x)})
            row.update({f"feasible_{v.value}": flags[k] for v, flags in report.feasible.items()})
            rows.append(row)
        return pd.DataFrame(rows)

    # =========================================================================
    # SUMMARIES
    # =========================================================================

    @staticmethod
    def simulation_summary(report: SimulationReport) -> dict:
        return {
            "variant": report.variant.value,
            "solver_mode": report.solver_mode,
            "budget_mode": report.budget_mode,
            "steps": len(report.steps),
            "completed": report.completed,
            "infeasible_at": report.infeasible_at,
            "closed_loop_cost": _number(report.closed_loop_cost),
            "tracking_error": _number(report.tracking_error),
            "suboptimality": _number(report.suboptimality),
            "final_state": [_number(v) for v in report.states[-1]],
        }

    @staticmethod
    def region_summary(report: RegionReport) -> dict:
        return {
            "samples": len(report.samples),
            "fractions": {v.value: _number(report.fraction(v)) for v in report.feasible},
            "contained": report.contained,
            "violations": list(report.violations),
            "witnesses": list(report.witnesses),
        }

    # =========================================================================
    # FILES
    # =========================================================================

    @staticmethod
    def _write_csv(frame: pd.DataFrame, path: Path) -> Path:
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        return path

    @staticmethod
    def _write_json(payload: dict, path: Path) -> Path:
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        return path

    def save_simulation(self, report: SimulationReport, directory: Path) -> list[Path]:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        written = [
            self._write_csv(self.trace_frame(report), directory / "trace.csv"),
            self._write_json(self.simulation_summary(report), directory / "summary.json"),
        ]
        if report.solver_mode == "admm":
            written.append(self._write_csv(self.history_frame(report), directory / "admm_history.csv"))
        logger.info(f"✓ Simulation report written to {directory}")
        return written

    def save_sweep(self, report: SweepReport, directory: Path) -> list[Path]:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        written = [
            self._write_csv(self.sweep_frame(report), directory / "sweep.csv"),
            self._write_csv(self.cells_frame(report), directory / "sweep_cells.csv"),
        ]
        logger.info(f"✓ Sweep tables written to {directory}")
        return written

    def save_region(self, report: RegionReport, directory: Path) -> list[Path]:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        written = [
            self._write_csv(self.region_frame(report), directory / "region.csv"),
            self._write_json(self.region_summary(report), directory / "region_summary.json"),
        ]
        logger.info(f"✓ Feasibility study written to {directory}")
        return written

import json
import math

import numpy as np
import pandas as pd
import pytest

from mpc.application.internal.ocpservice.OcpBuilderImpl import OcpBuilderImpl
from mpc.application.internal.simulationservice.SimulationServiceImpl import SimulationServiceImpl
from mpc.application.internal.studyservice.StudyServiceImpl import StudyServiceImpl, cell_problem
from mpc.domain.model.commands.BudgetSweepCommand import DEFAULT_BUDGETS, BudgetSweepCommand
from mpc.domain.model.commands.FeasibilityRegionCommand import FeasibilityRegionCommand
from mpc.domain.model.value_objects.OcpVariant import OcpVariant
from mpc.domain.model.value_objects.SolverMode import AdmmBudget, AdmmSettings, SolverMode
from mpc.domain.model.value_objects.SweepReport import SweepCell, SweepReport, SweepRow
from mpc.domain.services.TargetSampler import sample_target
from mpc.infrastructure.persistence.repositories.ReportRepositoryImpl import (
    HISTORY_COLUMNS,
    SWEEP_COLUMNS,
    ReportRepositoryImpl,
)
from terminal.domain.model.aggregates.TerminalIngredients import SubsystemIngredients, TerminalIngredients
from tests.conftest import build_scalar_network


@pytest.fixture(scope="module")
def studies(solver):
    return StudyServiceImpl(OcpBuilderImpl(solver), solver, jobs=2)


# =========================================================================
# FEASIBLE REGIONS
# =========================================================================

def test_region_study_flags_each_sample(studies, scalar_network, scalar_ingredients):
    samples = [np.array([0.0]), np.array([0.5]), np.array([6.0])]
    report = studies.feasibility_region_study(
        scalar_network, scalar_ingredients, (OcpVariant.DST, OcpVariant.APP), samples,
    )
    for variant in (OcpVariant.DST, OcpVariant.APP):
        assert report.feasible[variant][0]
        assert not report.feasible[variant][2]
    assert report.contained
    assert report.fraction(OcpVariant.DST) >= report.fraction(OcpVariant.APP)


def test_region_command_draws_seeded_samples(studies, pair_network, pair_ingredients):
    command = FeasibilityRegionCommand(seed=3, n_samples=6, radius=0.2, variants=(OcpVariant.DST_DD,))
    first = studies.execute_region(command, pair_network, pair_ingredients)
    second = studies.execute_region(command, pair_network, pair_ingredients)
    assert len(first.samples) == 6
    for a, b in zip(first.samples, second.samples):
        np.testing.assert_array_equal(a, b)
    assert first.feasible == second.feasible
    assert first.violations == ()


def test_free_centers_enlarge_the_feasible_region(studies):
    # one step from x = 4.9 lands in [3.39, 7.39]; a set centred at 0 reaches
    # at most |u| / |K| = 2 / 0.7 while a zero-radius set at an equilibrium works
    network = build_scalar_network(horizon=1)
    ingredients = TerminalIngredients(subsystems=(SubsystemIngredients(id=1, P=[[2.0]], K=[[-0.7]]),))
    samples = [np.array([0.0]), np.array([4.9])]
    report = studies.feasibility_region_study(network, ingredients, (OcpVariant.DST, OcpVariant.APP), samples)
    assert report.feasible[OcpVariant.DST] == (True, True)
    assert report.feasible[OcpVariant.APP] == (True, False)
    assert report.witnesses == (1,)
    assert report.violations == ()


@pytest.mark.slow
def test_benchmark_region_of_free_centers_contains_the_regulation_region(studies, benchmark_network,
                                                                         benchmark_ingredients):
    command = FeasibilityRegionCommand(seed=5, n_samples=4, radius=0.1, variants=(OcpVariant.DST, OcpVariant.APP))
    report = studies.execute_region(command, benchmark_network, benchmark_ingredients)
    assert report.violations == ()
    assert report.fraction(OcpVariant.DST) >= report.fraction(OcpVariant.APP)


@pytest.mark.slow
def test_benchmark_centers_move_away_from_the_equilibrium(solver, benchmark_network, benchmark_ingredients):
    builder = OcpBuilderImpl(solver)
    origin = np.zeros(benchmark_network.n_total)
    offsets = []
    for seed in (1, 2, 3):
        x_r, _ = sample_target(benchmark_network, np.random.default_rng(seed))
        instance = builder.build(OcpVariant.DST, benchmark_network, benchmark_ingredients, origin, x_r)
        solution = builder.extract_solution(builder.solve_central(instance), instance)
        offsets.append(solution.center_offset())
    assert max(offsets) > 1e-4


def test_region_command_validates_its_inputs():
    with pytest.raises(ValueError):
        FeasibilityRegionCommand(seed=0, n_samples=0)
    with pytest.raises(ValueError):
        FeasibilityRegionCommand(seed=0, radius=0.0)


# =========================================================================
# BUDGET SWEEP
# =========================================================================

def test_regulation_cells_start_at_the_target():
    target = np.array([0.3, -0.2])
    start, reference = cell_problem(OcpVariant.APP, np.zeros(2), target)
    np.testing.assert_array_equal(start, target)
    np.testing.assert_array_equal(reference, np.zeros(2))
    start, reference = cell_problem(OcpVariant.DST, np.zeros(2), target)
    np.testing.assert_array_equal(reference, target)


def test_sweep_command_defaults_and_validation():
    assert DEFAULT_BUDGETS == (0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4, 1.6, 1.8, 2.0)
    with pytest.raises(ValueError):
        BudgetSweepCommand(seed=0, n_targets=0)
    with pytest.raises(ValueError):
        BudgetSweepCommand(seed=0, budgets=(0.2, -1.0))


def test_empty_target_list_is_rejected(studies, scalar_network, scalar_ingredients):
    with pytest.raises(ValueError):
        studies.budget_sweep(scalar_network, scalar_ingredients, (OcpVariant.DST,), [], (0.5,))


def test_sweep_row_statistics():
    row = SweepRow.of(0.4, OcpVariant.DST, "iterations", [1, 2, 3, 4, 5])
    assert (row.count, row.median, row.min, row.max) == (5, 3.0, 1.0, 5.0)
    assert row.q25 == 2.0 and row.q75 == 4.0
    empty = SweepRow.of(0.4, OcpVariant.DST, "suboptimality", [])
    assert empty.count == 0 and math.isnan(empty.median)


@pytest.mark.slow
def test_budget_sweep_produces_one_row_per_metric(studies, scalar_network, scalar_ingredients):
    report = studies.budget_sweep(
        scalar_network, scalar_ingredients, (OcpVariant.DST_DD, OcpVariant.APP), [np.array([0.5])], (2.0,),
        T_sim=2,
    )
    assert len(report.cells) == 2
    assert {c.status for c in report.cells} <= {"ok", "budget_too_small", "infeasible"}
    assert len(report.rows) == 4
    assert report.row(OcpVariant.DST_DD, 2.0, "iterations").metric == "iterations"
    assert report.central_costs[(OcpVariant.APP, 0)] > 0


# =========================================================================
# REPORT FILES
# =========================================================================

def test_simulation_files(tmp_path, solver, pair_network, pair_ingredients):
    simulation = SimulationServiceImpl(OcpBuilderImpl(solver), solver, jobs=1)
    mode = SolverMode.consensus(AdmmSettings(rho=1.0, budget=AdmmBudget(max_iters=3)))
    report = simulation.simulate(pair_network, pair_ingredients, OcpVariant.DST_DD, [0.5, -0.5], [0.3, 0.3], 2, mode)

    written = ReportRepositoryImpl().save_simulation(report, tmp_path / "run")
    assert sorted(p.name for p in written) == ["admm_history.csv", "summary.json", "trace.csv"]

    history = pd.read_csv(tmp_path / "run" / "admm_history.csv")
    assert list(history.columns) == HISTORY_COLUMNS
    assert len(history) == 6
    trace = pd.read_csv(tmp_path / "run" / "trace.csv")
    assert {"timestep", "status", "x_0", "x_r_1", "u_0", "alpha_2"} <= set(trace.columns)
    summary = json.loads((tmp_path / "run" / "summary.json").read_text())
    assert summary["completed"] and summary["solver_mode"] == "admm"
    assert b"\r\n" not in (tmp_path / "run" / "trace.csv").read_bytes()


def test_sweep_files(tmp_path):
    cells = (
        SweepCell(OcpVariant.DST, 0.2, 0, "ok", 0.05, (3, 4)),
        SweepCell(OcpVariant.DST, 0.2, 1, "budget_too_small"),
    )
    rows = (
        SweepRow.of(0.2, OcpVariant.DST, "suboptimality", [0.05]),
        SweepRow.of(0.2, OcpVariant.DST, "iterations", [3, 4]),
    )
    report = SweepReport(cells=cells, rows=rows, central_costs={(OcpVariant.DST, 0): 1.0})
    assert report.excluded() == [cells[1]]

    ReportRepositoryImpl().save_sweep(report, tmp_path)
    sweep = pd.read_csv(tmp_path / "sweep.csv")
    assert list(sweep.columns) == SWEEP_COLUMNS
    assert sweep.loc[1, "median"] == pytest.approx(3.5)
    cell_table = pd.read_csv(tmp_path / "sweep_cells.csv")
    assert list(cell_table["status"]) == ["ok", "budget_too_small"]

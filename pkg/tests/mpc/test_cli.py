import json

import pytest
from pydantic import ValidationError

from networkmodel.domain.model.exceptions.NetworkErrors import SchemaError
from networkmodel.infrastructure.persistence.repositories.NetworkRepositoryImpl import NetworkRepositoryImpl
from mpc.application.internal.pipelineservice.PipelineServiceImpl import PipelineServiceImpl
from mpc.domain.model.exceptions.MpcErrors import BudgetTooSmallError, InfeasibleAtStepError, NoIncumbentError
from mpc.interface.cli.ArgumentParser import parse_config
from mpc.interface.cli.CommandHandlers import (
    EXIT_CONFIG,
    EXIT_INFEASIBLE,
    EXIT_OK,
    EXIT_SOLVER,
    exit_code_for,
    run,
)
from mpc.interface.cli.RunConfig import CliCommand
from shared.infrastructure.configuration.solver_configuration import SolverSettings
from terminal.domain.model.exceptions.TerminalErrors import SynthesisInfeasibleError


@pytest.fixture(scope="module")
def services():
    return PipelineServiceImpl(
        SolverSettings(solver="CLARABEL", feas_tol=1e-8, gap_tol=1e-8, jobs=1, log_level="INFO"),
    )


@pytest.fixture
def network_file(tmp_path, scalar_network):
    return NetworkRepositoryImpl().save(scalar_network, tmp_path / "scalar.json")


# =========================================================================
# CONFIGURATION
# =========================================================================

def test_flags_override_the_config_file(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"command": "simulate", "variant": "DST_DD", "T_sim": 4, "seed": 1}))
    config = parse_config(["simulate", "--config", str(path), "--T-sim", "7"])
    assert config.command is CliCommand.SIMULATE
    assert config.variant.value == "DST_DD"
    assert config.T_sim == 7


def test_constant_reference_flag_becomes_one_segment():
    config = parse_config(["simulate", "--reference", "0.5", "0.1"])
    assert len(config.reference) == 1
    assert config.reference[0].start_time == 0 and config.reference[0].x_r == [0.5, 0.1]


def test_admm_defaults_to_an_iteration_budget():
    config = parse_config(["simulate", "--seed", "1", "--mode", "admm", "--rho", "2.0"])
    assert config.max_iters == 200 and config.max_time is None


@pytest.mark.parametrize("argv", [
    ["simulate", "--seed", "1", "--mode", "admm"],
    ["sweep", "--seed", "1", "--rho", "1.0", "--targets", "0"],
    ["sweep", "--seed", "1"],
    ["region"],
    ["simulate", "--variant", "DST"],
    ["discretize"],
    ["sweep", "--seed", "1", "--rho", "1.0", "--budgets", "0.2", "-0.1"],
])
def test_invalid_combinations_are_rejected(argv):
    with pytest.raises(ValidationError):
        parse_config(argv)


def test_regulation_run_needs_no_seed():
    assert parse_config(["simulate", "--variant", "APP"]).seed is None


def test_exit_codes_by_error_kind():
    assert exit_code_for(InfeasibleAtStepError(2, "halted")) == EXIT_INFEASIBLE
    assert exit_code_for(SynthesisInfeasibleError("no certificate")) == EXIT_INFEASIBLE
    assert exit_code_for(NoIncumbentError("no point")) == EXIT_SOLVER
    assert exit_code_for(SchemaError("bad file")) == EXIT_CONFIG
    assert exit_code_for(BudgetTooSmallError("too short")) == EXIT_CONFIG
    assert exit_code_for(RuntimeError("boom")) == EXIT_SOLVER


# =========================================================================
# COMMANDS
# =========================================================================

def test_unknown_command_exits_through_argparse():
    with pytest.raises(SystemExit) as error:
        run(["fly"])
    assert error.value.code == 2


def test_bad_combination_exits_with_config_code(services):
    assert run(["simulate", "--seed", "1", "--mode", "admm"], services) == EXIT_CONFIG


def test_malformed_network_exits_with_config_code(tmp_path, services):
    path = tmp_path / "broken.json"
    path.write_text("{\"subsystems\": 3}")
    argv = ["simulate", "--network", str(path), "--reference", "0.0", "--output", str(tmp_path / "out")]
    assert run(argv, services) == EXIT_CONFIG


def test_synthesize_then_simulate(tmp_path, services, network_file):
    ingredients = tmp_path / "ingredients.json"
    assert run(["synthesize", "--network", str(network_file), "--output", str(ingredients)], services) == EXIT_OK
    assert ingredients.exists()

    out = tmp_path / "run"
    argv = [
        "simulate", "--network", str(network_file), "--ingredients", str(ingredients),
        "--x-init", "0.0", "--reference", "1.0", "--T-sim", "3", "--output", str(out),
    ]
    assert run(argv, services) == EXIT_OK
    summary = json.loads((out / "summary.json").read_text())
    assert summary["steps"] == 3 and summary["completed"]


def test_infeasible_run_exits_with_infeasibility_code(tmp_path, services, network_file):
    out = tmp_path / "run"
    argv = [
        "simulate", "--network", str(network_file), "--x-init", "6.0", "--reference", "0.0",
        "--output", str(out),
    ]
    assert run(argv, services) == EXIT_INFEASIBLE
    assert json.loads((out / "summary.json").read_text())["infeasible_at"] == 0


def test_verify_writes_its_report(tmp_path, services, network_file):
    out = tmp_path / "verify"
    argv = [
        "verify", "--network", str(network_file), "--seed", "5", "--verify-samples", "200",
        "--reference", "0.5", "--output", str(out),
    ]
    assert run(argv, services) == EXIT_OK
    summary = json.loads((out / "verify.json").read_text())
    assert summary["decrease"]["violations"] == 0
    assert summary["invariance"]["1"]["holds"]


def test_region_writes_its_tables(tmp_path, services, network_file):
    out = tmp_path / "region"
    argv = [
        "region", "--network", str(network_file), "--seed", "2", "--samples", "4", "--radius", "1.0",
        "--variants", "DST", "APP", "--output", str(out),
    ]
    assert run(argv, services) == EXIT_OK
    assert (out / "region.csv").exists()
    assert json.loads((out / "region_summary.json").read_text())["samples"] == 4

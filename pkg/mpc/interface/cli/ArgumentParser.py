import argparse
import json
from pathlib import Path

from mpc.interface.cli.RunConfig import CliCommand, RunConfig


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dmpc",
        description="Distributed tracking MPC with online terminal sets: synthesis, simulation and studies",
    )
    parser.add_argument("command", choices=[c.value for c in CliCommand])
    parser.add_argument("--config", type=Path, help="JSON file with RunConfig fields; flags override it")
    parser.add_argument("--network", type=Path)
    parser.add_argument("--ingredients", type=Path)
    parser.add_argument("--output", type=Path)
    parser.add_argument("--variant")
    parser.add_argument("--variants", nargs="+")
    parser.add_argument("--mode", dest="solver_mode", choices=["central", "admm"])
    parser.add_argument("--rho", type=float)
    parser.add_argument("--max-iters", dest="max_iters", type=int)
    parser.add_argument("--max-time", dest="max_time", type=float)
    parser.add_argument("--residual-balancing", dest="residual_balancing", action="store_true", default=None)
    parser.add_argument("--no-warm-start", dest="warm_start", action="store_false", default=None)
    parser.add_argument("--tolerance", type=float)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--T-sim", dest="T_sim", type=int)
    parser.add_argument("--x-init", dest="x_init", type=float, nargs="+")
    parser.add_argument("--reference", type=float, nargs="+", help="Constant reference x_r")
    parser.add_argument("--samples", dest="n_samples", type=int)
    parser.add_argument("--verify-samples", dest="n_verify_samples", type=int)
    parser.add_argument("--radius", type=float)
    parser.add_argument("--targets", dest="n_targets", type=int)
    parser.add_argument("--budgets", type=float, nargs="+")
    parser.add_argument("--epsilon", type=float)
    parser.add_argument("--lifting", choices=["own_block", "neighborhood"])
    parser.add_argument("--h", type=float)
    parser.add_argument("--jobs", type=int)
    parser.add_argument("--host")
    parser.add_argument("--port", type=int)
    return parser


def parse_config(argv: list[str] | None = None) -> RunConfig:
    """
    Flags over the optional --config file, validated as a RunConfig.
    Raises pydantic.ValidationError on a bad combination.
    """
    args = build_parser().parse_args(argv)
    fields = {}
    if args.config is not None:
        fields.update(json.loads(args.config.read_text(encoding="utf-8")))
    for name, value in vars(args).items():
        if name == "config" or value is None:
            continue
        fields[name] = value
    if isinstance(fields.get("reference"), list) and fields["reference"] and not isinstance(fields["reference"][0], dict):
        fields["reference"] = [{"start_time": 0, "x_r": fields["reference"]}]
    return RunConfig.model_validate(fields)

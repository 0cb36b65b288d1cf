"""
Shared plumbing of the sweep and check sub-commands
"""
import argparse
from pathlib import Path

from paramvex.services.analysis import ScenarioPlan, load_scenario, plan_instance, plan_scenario


def add_program_arguments(parser: argparse.ArgumentParser) -> None:
    """--config FILE | --instance ID, plus --out"""
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--config", help="Scenario configuration file (JSON)")
    source.add_argument("--instance", help="Catalog instance id, e.g. P-LIN")
    parser.add_argument("--out", help="Output file; stdout when omitted")


def resolve_plan(args: argparse.Namespace) -> ScenarioPlan:
    """
    Build the scenario plan selected on the command line

    Raises:
        ScenarioError: if the scenario or instance cannot be resolved
    """
    if args.config is not None:
        config = load_scenario(args.config)
        return plan_scenario(
            config, profile=args.tol, seed=args.seed, base_dir=Path(args.config).parent
        )
    return plan_instance(args.instance, profile=args.tol, seed=args.seed)

"""Arguments and config loading shared by the run subcommands."""

import argparse
import logging

from spectral_lab.models.experiments import Profile
from spectral_lab.schemas.run_config import RunConfig, parse_config, profile_config
from spectral_lab.services.persistence import RunDirectory

logger = logging.getLogger(__name__)


def add_run_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", default=None, help="JSON run config")
    parser.add_argument("--out", default=None, help="Output directory (default: output.directory)")
    parser.add_argument(
        "--profile",
        choices=[profile.value for profile in Profile],
        default=None,
        help="Preset filling unset config fields; 'desk' when no config is given",
    )
    parser.add_argument("--seed-override", type=int, default=None, help="Replace every seed")
    add_quiet_argument(parser)


def add_quiet_argument(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--quiet", action="store_true", help="Only log warnings and errors")


def load_run_config(args: argparse.Namespace) -> RunConfig:
    """Config from ``--config`` (merged over ``--profile``) or from the profile alone."""
    if args.config is None:
        profile = args.profile or Profile.desk.value
        logger.info(f"No config given, using the {profile} profile")
        return profile_config(profile, args.seed_override)
    return parse_config(args.config, args.profile, args.seed_override)


def open_run(args: argparse.Namespace, command: str, config: RunConfig) -> RunDirectory:
    run = RunDirectory(args.out or config.output.directory, command, config)
    run.write_config()
    return run

"""``verify-bounds``: randomized check of the gradient bounds."""

import argparse
import logging

from spectral_lab.commands.common import add_run_arguments, load_run_config, open_run
from spectral_lab.core.exceptions import NumericError
from spectral_lab.schemas.manifest import BoundSummary
from spectral_lab.services.persistence import bounds_frame
from spectral_lab.services.theory import verify_bounds

logger = logging.getLogger(__name__)

NAME = "verify-bounds"


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser(NAME, help="Falsification suite for the gradient bounds")
    add_run_arguments(parser)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    config = load_run_config(args)
    report, summary = verify_bounds(
        profile=args.profile or "desk",
        instances=config.experiment.instances,
        seed=config.init.seed,
    )
    output = open_run(args, NAME, config)
    output.write_csv("bounds.csv", bounds_frame(report))
    output.write_json("summary.json", BoundSummary.model_validate(summary).model_dump(mode="json"))
    output.finish()
    if not report.passed():
        logger.error(f"{report.violations} bound violations, min slack {report.min_slack:.3e}")
        return NumericError.exit_code
    return 0

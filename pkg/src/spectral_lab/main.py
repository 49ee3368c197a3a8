"""Command-line entry point."""

import logging
import sys
from collections.abc import Sequence

from spectral_lab.commands.router import build_parser
from spectral_lab.core.config import settings
from spectral_lab.core.exceptions import SpectralLabError

logger = logging.getLogger(__name__)


def configure_logging(quiet: bool = False) -> None:
    level = logging.WARNING if quiet else getattr(logging, settings.log_level.upper(), logging.INFO)
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        force=True,
    )


def run_command(argv: Sequence[str] | None = None) -> int:
    """Parse arguments, run the chosen subcommand and map failures to exit codes.

    Returns:
        0 on success, 2 for configuration errors, 3 numeric, 4 size, 5 I/O,
        1 for anything unexpected.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    configure_logging(getattr(args, "quiet", False))
    try:
        return int(args.handler(args))
    except SpectralLabError as exc:
        logger.error(f"{args.command} failed: {exc}")
        return exc.exit_code
    except Exception:
        logger.exception(f"{args.command} failed unexpectedly")
        return 1


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()

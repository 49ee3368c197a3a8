"""Command router that aggregates all subcommands."""

import argparse

from spectral_lab import __version__
from spectral_lab.commands import (
    entangle_sweep,
    init_sweep,
    plot,
    redundancy,
    robustness,
    train,
    verify_bounds,
)

COMMANDS = (redundancy, train, robustness, entangle_sweep, init_sweep, verify_bounds, plot)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spectral-lab",
        description="Statevector simulation and spectral analysis of reuploader circuits",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        command.register(subparsers)
    return parser

"""``plot``: SVG heatmap of a dynamics or trace CSV."""

import argparse

from spectral_lab.commands.common import add_quiet_argument
from spectral_lab.services.plotting import plot_dynamics

NAME = "plot"


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser(NAME, help="Render epoch x omega dynamics as an SVG heatmap")
    parser.add_argument("--in", dest="in_path", required=True, help="dynamics.csv (epoch,omega,normalized) or the trace.csv next to it")
    parser.add_argument("--out", required=True, help="SVG output path")
    parser.add_argument("--title", default=None)
    add_quiet_argument(parser)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    plot_dynamics(args.in_path, args.out, args.title)
    return 0

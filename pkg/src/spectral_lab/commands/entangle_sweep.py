"""``entangle-sweep``: convergence speed per CNOT layout."""

import argparse
import logging

from pydantic import BaseModel

from spectral_lab.commands.common import add_run_arguments, load_run_config, open_run
from spectral_lab.services.persistence import convergence_frame
from spectral_lab.services.sweeps import entanglement_sweep

logger = logging.getLogger(__name__)

NAME = "entangle-sweep"


class SweepSummary(BaseModel):
    layouts: list[str]
    seeds: list[int]
    threshold: float
    hold: int
    top_frequency: int
    mean_epochs_at_top: dict[str, float | None]


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser(NAME, help="Epochs to converge per entanglement layout")
    add_run_arguments(parser)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    config = load_run_config(args)
    table = entanglement_sweep(config)

    output = open_run(args, NAME, config)
    output.write_csv("convergence.csv", convergence_frame(table))
    top = max(config.target.frequencies)
    labels = list(table.traces)
    summary = SweepSummary(
        layouts=labels,
        seeds=config.experiment.seeds,
        threshold=config.experiment.threshold,
        hold=config.experiment.hold,
        top_frequency=top,
        mean_epochs_at_top={label: table.mean_epochs(label, top) for label in labels},
    )
    output.write_json("summary.json", summary.model_dump(mode="json"))
    output.finish()
    return 0

"""``robustness``: perturbation robustness of trained models."""

import argparse
import logging

import numpy as np
from pydantic import BaseModel

from spectral_lab.commands.common import add_run_arguments, load_run_config, open_run
from spectral_lab.services.persistence import perturbation_frame
from spectral_lab.services.robustness import robustness_experiment

logger = logging.getLogger(__name__)

NAME = "robustness"


class RobustnessSummary(BaseModel):
    deltas: int
    omegas: list[int]
    samples_per_delta: int
    phase_draws: int
    undefined_omegas: list[int]


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser(NAME, help="Coefficient robustness under random perturbations")
    add_run_arguments(parser)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    config = load_run_config(args)
    report = robustness_experiment(config)

    output = open_run(args, NAME, config)
    output.write_csv("robustness.csv", perturbation_frame(report))
    undefined = np.all(np.isnan(report.matrix), axis=0)
    summary = RobustnessSummary(
        deltas=int(report.deltas.size),
        omegas=[int(omega) for omega in report.omegas],
        samples_per_delta=report.samples_per_delta,
        phase_draws=len(config.experiment.phase_seeds),
        undefined_omegas=[int(omega) for omega in report.omegas[undefined]],
    )
    output.write_json("summary.json", summary.model_dump(mode="json"))
    output.finish()
    return 0

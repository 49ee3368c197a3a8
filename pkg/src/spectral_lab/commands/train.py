"""``train``: one spectral-dynamics training run."""

import argparse
import logging

import numpy as np
from pydantic import BaseModel

from spectral_lab.commands.common import add_run_arguments, load_run_config, open_run
from spectral_lab.services.circuit import circuit_from_config, init_params
from spectral_lab.services.persistence import (
    dynamics_frame,
    snapshots_frame,
    trace_frame,
)
from spectral_lab.services.sweeps import encoding_comparison
from spectral_lab.services.targets import make_target
from spectral_lab.services.training import epochs_to_threshold, options_from_config, train

logger = logging.getLogger(__name__)

NAME = "train"


class TrainSummary(BaseModel):
    """summary.json of a training run."""

    epochs_run: int
    evaluations: int
    initial_loss: float | None
    final_loss: float | None
    max_abs_parseval_residual: float | None
    aborted: bool
    early_stopped: bool
    threshold: float
    epochs_to_threshold: dict[str, int | None]


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser(NAME, help="Train a circuit on a sinusoidal target")
    add_run_arguments(parser)
    parser.add_argument(
        "--compare-encodings",
        action="store_true",
        help="Also train every encoding in experiment.encodings and write encoding_comparison.csv",
    )
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    config = load_run_config(args)
    circuit = circuit_from_config(config.circuit)
    target = make_target(
        config.target.frequencies, config.target.amplitudes, phase_seed=config.target.phase_seed
    )
    params0 = init_params(circuit, config.init.sigma, config.init.seed)
    trace = train(circuit, params0, target, options_from_config(config.training))

    output = open_run(args, NAME, config)
    output.write_params("params_initial.bin", params0)
    output.write_params("params_final.bin", trace.final_params or params0)
    output.write_csv("trace.csv", trace_frame(trace))
    output.write_csv("dynamics.csv", dynamics_frame(trace))
    output.write_csv("snapshots.csv", snapshots_frame(trace))
    if args.compare_encodings:
        output.write_csv("encoding_comparison.csv", encoding_comparison(config))

    threshold, hold = config.experiment.threshold, config.experiment.hold
    residuals = np.abs(trace.parseval_residuals)
    summary = TrainSummary(
        epochs_run=trace.eval_epochs[-1] if trace.eval_epochs else 0,
        evaluations=len(trace.eval_epochs),
        initial_loss=trace.losses[0] if trace.losses else None,
        final_loss=trace.losses[-1] if trace.losses else None,
        max_abs_parseval_residual=float(residuals.max()) if residuals.size else None,
        aborted=trace.aborted,
        early_stopped=trace.early_stopped,
        threshold=threshold,
        epochs_to_threshold={
            str(omega): epochs_to_threshold(trace, omega, threshold, hold)
            for omega in target.frequencies
        },
    )
    output.write_json("summary.json", summary.model_dump(mode="json"))
    output.finish()
    return 0

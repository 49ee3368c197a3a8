"""``init-sweep``: initial coefficient sizes against the init scale."""

import argparse
import logging

import pandas as pd
from pydantic import BaseModel

from spectral_lab.commands.common import add_run_arguments, load_run_config, open_run
from spectral_lab.services.persistence import dynamics_frame, init_sweep_frame
from spectral_lab.services.sweeps import init_sweep

logger = logging.getLogger(__name__)

NAME = "init-sweep"


class InitSweepSummary(BaseModel):
    """Sigmas are standard deviations; their squares are listed for reference."""

    sigmas: list[float]
    sigma_squared: list[float]
    seeds: list[int]
    omega_max_track: int
    trained: bool


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser(NAME, help="Initial Fourier coefficients per init std-dev")
    add_run_arguments(parser)
    parser.add_argument("--train", action="store_true", help="Also train per sigma and seed")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    config = load_run_config(args)
    table = init_sweep(config, run_training=args.train or config.experiment.train_sigmas)

    output = open_run(args, NAME, config)
    output.write_csv("init_coefficients.csv", init_sweep_frame(table))
    if table.traces:
        frames = []
        for sigma, traces in table.traces.items():
            for seed, trace in zip(table.seeds, traces, strict=True):
                frame = dynamics_frame(trace)
                frame.insert(0, "seed", seed)
                frame.insert(0, "sigma", sigma)
                frames.append(frame)
        output.write_csv("init_dynamics.csv", pd.concat(frames, ignore_index=True))
    summary = InitSweepSummary(
        sigmas=table.sigmas.tolist(),
        sigma_squared=(table.sigmas**2).tolist(),
        seeds=list(table.seeds),
        omega_max_track=config.training.omega_max_track,
        trained=bool(table.traces),
    )
    output.write_json("summary.json", summary.model_dump(mode="json"))
    output.finish()
    return 0

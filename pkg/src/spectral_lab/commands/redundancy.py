"""``redundancy``: frequency spectrum and coefficient profile of a circuit."""

import argparse
import logging
import math

from pydantic import BaseModel

from spectral_lab.commands.common import add_run_arguments, load_run_config, open_run
from spectral_lab.services.circuit import circuit_from_config
from spectral_lab.services.fourier import mean_coefficient_profile
from spectral_lab.services.spectrum import redundancy_profile, spectrum_frame, spectrum_payload

logger = logging.getLogger(__name__)

NAME = "redundancy"


class RedundancySummary(BaseModel):
    """summary.json of a redundancy run."""

    n: int
    L: int
    encoding: str
    betas: list[float]
    frequency_count: int
    max_frequency: float
    total_pairs: int
    redundancy_at_zero: int
    sigma: float
    profile_samples: int
    spearman_gradient_redundancy: float | None


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser(NAME, help="Redundancy spectrum and mean coefficient profile")
    add_run_arguments(parser)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    config = load_run_config(args)
    circuit = circuit_from_config(config.circuit)
    spectrum = redundancy_profile(circuit.encoding, circuit.n, circuit.L)
    seeds = [config.init.seed + i for i in range(config.experiment.profile_samples)]
    profile, rho = mean_coefficient_profile(circuit, config.init.sigma, seeds)

    output = open_run(args, NAME, config)
    output.write_csv("spectrum.csv", spectrum_frame(spectrum))
    output.write_json("spectrum.json", spectrum_payload(spectrum))
    output.write_csv("coefficient_profile.csv", profile)
    summary = RedundancySummary(
        n=circuit.n,
        L=circuit.L,
        encoding=circuit.encoding.kind.value,
        betas=list(circuit.encoding.betas),
        frequency_count=len(spectrum.entries),
        max_frequency=spectrum.max_frequency(),
        total_pairs=spectrum.total(),
        redundancy_at_zero=spectrum.redundancy(0.0),
        sigma=config.init.sigma,
        profile_samples=len(seeds),
        spearman_gradient_redundancy=None if math.isnan(rho) else rho,
    )
    output.write_json("summary.json", summary.model_dump(mode="json"))
    output.finish()
    logger.info(f"{len(spectrum.entries)} frequencies, max {spectrum.max_frequency():g}")
    return 0

"""Pydantic schemas for run configs, manifests and summaries."""

from spectral_lab.schemas.manifest import BoundSummary, FileEntry, RunManifest
from spectral_lab.schemas.run_config import (
    CircuitConfig,
    ExperimentConfig,
    InitConfig,
    LayoutConfig,
    OutputConfig,
    RunConfig,
    TargetConfig,
    TrainingConfig,
    config_hash,
    dump_config,
    parse_config,
    parse_config_text,
    profile_config,
    validate_config,
)

__all__ = [
    "BoundSummary",
    "FileEntry",
    "RunManifest",
    "CircuitConfig",
    "ExperimentConfig",
    "InitConfig",
    "LayoutConfig",
    "OutputConfig",
    "RunConfig",
    "TargetConfig",
    "TrainingConfig",
    "config_hash",
    "dump_config",
    "parse_config",
    "parse_config_text",
    "profile_config",
    "validate_config",
]

"""Shared fixtures: small circuits and fast run configs."""

import copy
import json
from pathlib import Path
from typing import Any

import numpy as np
import pytest

from spectral_lab.models.circuit import ReuploaderCircuit
from spectral_lab.schemas.run_config import RunConfig, validate_config
from spectral_lab.services.circuit import build_circuit

TINY_CONFIG: dict[str, Any] = {
    "circuit": {"n": 1, "L": 1, "encoding": "constant", "entanglement": "none"},
    "init": {"sigma": 0.01, "seed": 0},
    "target": {"frequencies": [1], "phase_seed": 0},
    "training": {
        "lr": 0.01,
        "epochs": 20,
        "eval_every": 5,
        "grid_size": 16,
        "omega_max_track": 4,
    },
    "experiment": {
        "seeds": [0, 1],
        "deltas": [0.0, 0.5],
        "n_directions": 3,
        "phase_seeds": [0],
        "layouts": [{"generator": "none"}],
        "sigmas": [0.0, 0.1],
        "encodings": ["constant", "linear"],
        "instances": 3,
        "profile_samples": 2,
    },
    "output": {"directory": "runs/tiny"},
}


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def ladder_circuit() -> ReuploaderCircuit:
    """Two qubits, two layers, constant encoding, CNOT ladder."""
    return build_circuit(2, 2, "constant", "ladder")


@pytest.fixture
def tiny_config_data() -> dict[str, Any]:
    return copy.deepcopy(TINY_CONFIG)


@pytest.fixture
def tiny_config(tiny_config_data: dict[str, Any]) -> RunConfig:
    return validate_config(tiny_config_data)


@pytest.fixture
def tiny_config_file(tmp_path: Path, tiny_config_data: dict[str, Any]) -> Path:
    path = tmp_path / "config.json"
    path.write_text(json.dumps(tiny_config_data), encoding="utf-8")
    return path

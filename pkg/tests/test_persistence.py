"""Artifact writing, checkpoints and run manifests."""

import json
import struct

import numpy as np
import pandas as pd
import pytest

from spectral_lab.core.exceptions import PersistenceError
from spectral_lab.models.circuit import ParameterTable
from spectral_lab.models.experiments import TrainingOptions
from spectral_lab.services.circuit import build_circuit, init_params
from spectral_lab.services.persistence import (
    RunDirectory,
    atomic_write_bytes,
    csv_bytes,
    dynamics_frame,
    json_bytes,
    read_params,
    sha256_file,
    snapshots_frame,
    trace_frame,
)
from spectral_lab.services.targets import make_target
from spectral_lab.services.training import train


def test_atomic_write_leaves_no_temporaries(tmp_path):
    target = tmp_path / "nested" / "out.bin"
    atomic_write_bytes(target, b"abc")
    atomic_write_bytes(target, b"defg")
    assert target.read_bytes() == b"defg"
    assert [path.name for path in target.parent.iterdir()] == ["out.bin"]


def test_atomic_write_failure(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(PersistenceError):
        atomic_write_bytes(blocker / "child.txt", b"data")


def test_failed_rename_removes_temporary(tmp_path, monkeypatch):
    target = tmp_path / "out.bin"
    target.write_bytes(b"old")

    def refuse(src, dst):
        raise OSError("rename refused")

    monkeypatch.setattr("spectral_lab.services.persistence.os.replace", refuse)
    with pytest.raises(PersistenceError, match="rename refused"):
        atomic_write_bytes(target, b"new")
    assert [path.name for path in tmp_path.iterdir()] == ["out.bin"]
    assert target.read_bytes() == b"old"


def test_csv_uses_seventeen_significant_digits():
    text = csv_bytes(pd.DataFrame({"value": [0.1], "missing": [np.nan]})).decode()
    assert text == "value,missing\n0.10000000000000001,\n"


def test_json_maps_non_finite_to_null():
    payload = json.loads(json_bytes({"a": float("nan"), "b": [np.float64(1.5), float("inf")]}))
    assert payload == {"a": None, "b": [1.5, None]}


def test_params_are_little_endian_float64(tmp_path):
    run = RunDirectory(tmp_path, "train")
    path = run.write_params("params.bin", ParameterTable(np.array([1.5, -2.25])))
    data = path.read_bytes()
    assert data == struct.pack("<dd", 1.5, -2.25)
    np.testing.assert_array_equal(read_params(path).values, [1.5, -2.25])


def test_truncated_checkpoint(tmp_path):
    path = tmp_path / "bad.bin"
    path.write_bytes(b"\x00" * 12)
    with pytest.raises(PersistenceError):
        read_params(path)


def test_trace_frames():
    circuit = build_circuit(1, 1)
    options = TrainingOptions(lr=0.01, epochs=10, eval_every=5, grid_size=16, omega_max_track=2)
    trace = train(circuit, init_params(circuit, 0.01, 0), make_target([1, 2]), options)
    assert list(trace_frame(trace).columns) == ["epoch", "loss", "parseval_residual"]
    dynamics = dynamics_frame(trace)
    assert list(dynamics.columns) == ["epoch", "omega", "normalized"]
    assert dynamics["epoch"].tolist() == [0, 0, 5, 5, 10, 10]
    assert dynamics["omega"].tolist() == [1, 2, 1, 2, 1, 2]
    snapshots = snapshots_frame(trace)
    assert list(snapshots.columns) == ["epoch", "omega", "re", "im", "abs"]
    assert len(snapshots) == 3 * 3


def test_manifest_lists_every_artifact(tmp_path, tiny_config):
    run = RunDirectory(tmp_path / "run", "redundancy", tiny_config)
    run.write_config()
    run.write_json("summary.json", {"ok": True})
    manifest = run.finish()
    names = [entry.path for entry in manifest.files]
    assert names == ["config.json", "summary.json"]
    for entry in manifest.files:
        assert entry.sha256 == sha256_file(tmp_path / "run" / entry.path)
    stored = json.loads((tmp_path / "run" / "manifest.json").read_text())
    assert stored["command"] == "redundancy"
    assert stored["params_byte_order"].startswith("little-endian")
    assert len(stored["config_hash"]) == 64

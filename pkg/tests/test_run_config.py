"""Run-config schema, profiles and loading."""

import json

import pytest

from spectral_lab.core.config import settings
from spectral_lab.core.exceptions import ConfigurationError, PersistenceError
from spectral_lab.models.circuit import EncodingKind, EntanglementKind
from spectral_lab.schemas.run_config import (
    RunConfig,
    config_hash,
    dump_config,
    parse_config,
    parse_config_text,
    profile_config,
    validate_config,
)

FULL_SCALE_CONFIG = {
    "circuit": {"n": 5, "L": 20, "encoding": "constant", "entanglement": "ladder"},
    "init": {"sigma": 0.01, "seed": 0},
    "target": {"frequencies": [5, 10, 15, 20, 25, 30, 35, 40, 45, 50]},
    "training": {
        "lr": 0.0005,
        "epochs": 3000,
        "eval_every": 5,
        "grid_size": 2048,
        "omega_max_track": 64,
    },
}


def test_full_scale_config_is_accepted():
    config = validate_config(FULL_SCALE_CONFIG)
    assert config.circuit.n == 5
    assert config.training.grid_size == 2048
    assert config.experiment.threshold == 0.9


def test_zero_qubits_rejected(tiny_config_data):
    tiny_config_data["circuit"]["n"] = 0
    with pytest.raises(ConfigurationError) as excinfo:
        validate_config(tiny_config_data)
    assert any(line.startswith("circuit.n") for line in excinfo.value.violations)


def test_every_violation_is_reported(tiny_config_data):
    tiny_config_data["circuit"]["n"] = 0
    tiny_config_data["training"]["lr"] = -1.0
    with pytest.raises(ConfigurationError) as excinfo:
        validate_config(tiny_config_data)
    locations = {line.split(":")[0] for line in excinfo.value.violations}
    assert {"circuit.n", "training.lr"} <= locations


def test_nyquist_rejected():
    data = json.loads(json.dumps(FULL_SCALE_CONFIG))
    data["circuit"]["encoding"] = "ternary"
    data["training"]["omega_max_track"] = 1024
    with pytest.raises(ConfigurationError, match="Nyquist"):
        validate_config(data)


def test_target_above_tracked_band_rejected(tiny_config_data):
    tiny_config_data["target"]["frequencies"] = [9]
    with pytest.raises(ConfigurationError):
        validate_config(tiny_config_data)


def test_unknown_key_rejected(tiny_config_data):
    tiny_config_data["circuit"]["qubits"] = 3
    with pytest.raises(ConfigurationError) as excinfo:
        validate_config(tiny_config_data)
    assert any(line.startswith("circuit.qubits") for line in excinfo.value.violations)


def test_custom_encoding_needs_betas(tiny_config_data):
    tiny_config_data["circuit"]["encoding"] = "custom"
    with pytest.raises(ConfigurationError):
        validate_config(tiny_config_data)
    tiny_config_data["circuit"]["betas"] = [1.0]
    assert validate_config(tiny_config_data).circuit.encoding is EncodingKind.custom


def test_random_layout_needs_count_and_seed(tiny_config_data):
    tiny_config_data["circuit"].update({"n": 3, "entanglement": "random"})
    with pytest.raises(ConfigurationError):
        validate_config(tiny_config_data)
    tiny_config_data["circuit"].update({"entanglement_count": 1, "entanglement_seed": 2})
    assert validate_config(tiny_config_data).circuit.entanglement_count == 1


def test_round_trip(tiny_config):
    assert parse_config_text(dump_config(tiny_config)) == tiny_config


def test_hash_is_stable(tiny_config):
    again = parse_config_text(dump_config(tiny_config))
    assert config_hash(again) == config_hash(tiny_config)
    changed = tiny_config.model_copy(update={"init": tiny_config.init.model_copy(update={"seed": 1})})
    assert config_hash(changed) != config_hash(tiny_config)


def test_profile_fills_unset_fields():
    config = validate_config({"circuit": {"n": 2}}, profile="desk")
    assert config.circuit.n == 2
    assert config.circuit.L == 4
    assert config.training.lr == 0.005


def test_profiles_validate():
    desk = profile_config("desk")
    full = profile_config("full")
    assert isinstance(desk, RunConfig)
    assert (full.circuit.n, full.circuit.L) == (5, 20)
    assert full.target.frequencies == list(range(5, 55, 5))


def test_seed_override(tiny_config_data):
    config = validate_config(tiny_config_data, seed_override=40)
    assert config.init.seed == 40
    assert config.target.phase_seed == 40
    assert config.experiment.seeds == [40, 41]
    assert config.experiment.phase_seeds == [40]


def test_missing_file(tmp_path):
    with pytest.raises(PersistenceError):
        parse_config(tmp_path / "absent.json")


def test_malformed_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(ConfigurationError, match="Malformed"):
        parse_config(path)


def test_non_object_root():
    with pytest.raises(ConfigurationError):
        parse_config_text("[1, 2]")


def test_profiles_entangle_and_reach_every_target():
    for name in ("desk", "full"):
        config = profile_config(name)
        assert config.circuit.entanglement is EntanglementKind.ladder


def test_uncoupled_observable_cannot_see_other_qubits(tiny_config_data):
    tiny_config_data["circuit"].update({"n": 3, "L": 2})
    tiny_config_data["target"]["frequencies"] = [1, 2, 3]
    with pytest.raises(ConfigurationError) as excinfo:
        validate_config(tiny_config_data)
    assert any("[3]" in line for line in excinfo.value.violations)
    tiny_config_data["circuit"]["entanglement"] = "ladder"
    assert validate_config(tiny_config_data).target.frequencies == [1, 2, 3]


def test_half_integer_lattice_reachability(tiny_config_data):
    tiny_config_data["circuit"].update({"encoding": "custom", "betas": [1.5], "L": 2})
    tiny_config_data["target"]["frequencies"] = [3]
    assert validate_config(tiny_config_data).circuit.betas == [1.5]
    tiny_config_data["target"]["frequencies"] = [1]
    with pytest.raises(ConfigurationError):
        validate_config(tiny_config_data)


def test_band_errors_reported_with_field_errors(tiny_config_data):
    tiny_config_data["training"]["lr"] = -1.0
    tiny_config_data["training"]["omega_max_track"] = 8
    tiny_config_data["experiment"]["seeds"] = []
    with pytest.raises(ConfigurationError) as excinfo:
        validate_config(tiny_config_data)
    locations = {line.split(":")[0] for line in excinfo.value.violations}
    assert {"training.lr", "training.omega_max_track", "experiment"} <= locations


def test_band_error_alone(tiny_config_data):
    tiny_config_data["training"]["omega_max_track"] = 8
    with pytest.raises(ConfigurationError) as excinfo:
        validate_config(tiny_config_data)
    assert [line.split(":")[0] for line in excinfo.value.violations] == ["training.omega_max_track"]


def test_default_sigma_follows_settings(monkeypatch, tiny_config_data):
    monkeypatch.setattr(settings, "default_sigma", 0.25)
    del tiny_config_data["init"]["sigma"]
    assert validate_config(tiny_config_data).init.sigma == 0.25

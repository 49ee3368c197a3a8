"""Run configuration schema, profiles and loading."""

import copy
import hashlib
import json
import logging
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ModelWrapValidatorHandler,
    ValidationError,
    model_validator,
)
from pydantic_core import InitErrorDetails, PydanticCustomError

from spectral_lab.core.config import settings
from spectral_lab.core.exceptions import ConfigurationError, PersistenceError
from spectral_lab.models.circuit import EncodingKind, EntanglementKind
from spectral_lab.models.experiments import Profile
from spectral_lab.services.circuit import circuit_from_config
from spectral_lab.services.spectrum import reachable_frequencies

logger = logging.getLogger(__name__)


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


# ============== Config Sections ==============
class CircuitConfig(_Strict):
    """Reuploader layout."""

    n: int = Field(..., ge=1, description="Number of qubits")
    L: int = Field(..., ge=1, description="Number of encoding layers")
    encoding: EncodingKind = EncodingKind.constant
    betas: list[float] | None = Field(None, description="Custom encoding scales, one per qubit")
    entanglement: EntanglementKind = EntanglementKind.none
    entanglement_count: int | None = Field(None, ge=0, description="CNOTs per block for random layouts")
    entanglement_seed: int | None = None
    observable_qubit: int = Field(0, ge=0)

    @model_validator(mode="after")
    def check_layout(self) -> "CircuitConfig":
        if self.encoding is EncodingKind.custom:
            if self.betas is None or len(self.betas) != self.n:
                raise ValueError(f"custom encoding needs {self.n} betas")
            if any(beta <= 0 for beta in self.betas):
                raise ValueError("encoding betas must be positive")
        elif self.betas is not None:
            raise ValueError("betas are only allowed with the custom encoding")
        if self.entanglement is EntanglementKind.random and (
            self.entanglement_count is None or self.entanglement_seed is None
        ):
            raise ValueError("random entanglement needs entanglement_count and entanglement_seed")
        if self.observable_qubit >= self.n:
            raise ValueError(f"observable_qubit {self.observable_qubit} out of range for n={self.n}")
        return self


class InitConfig(_Strict):
    sigma: float = Field(
        default_factory=lambda: settings.default_sigma,
        ge=0,
        description="Std-dev of the Gaussian initial angles",
    )
    seed: int = 0


class TargetConfig(_Strict):
    frequencies: list[int] = Field(..., min_length=1)
    amplitudes: list[float] | None = None
    phase_seed: int = 0

    @model_validator(mode="after")
    def check_frequencies(self) -> "TargetConfig":
        if any(omega <= 0 for omega in self.frequencies):
            raise ValueError("target frequencies must be positive")
        if len(set(self.frequencies)) != len(self.frequencies):
            raise ValueError("target frequencies must be distinct")
        if self.amplitudes is not None and len(self.amplitudes) != len(self.frequencies):
            raise ValueError("need one amplitude per target frequency")
        return self


class TrainingConfig(_Strict):
    lr: float = Field(0.0005, gt=0, description="Adam learning rate")
    epochs: int = Field(3000, ge=0)
    eval_every: int = Field(5, ge=1)
    grid_size: int = Field(256, ge=2, description="Grid size M")
    omega_max_track: int = Field(default_factory=lambda: settings.default_omega_max_track, ge=0)


class LayoutConfig(_Strict):
    generator: EntanglementKind
    count: int | None = Field(None, ge=0)

    def label(self) -> str:
        if self.generator is EntanglementKind.random:
            return f"random({self.count})"
        return self.generator.value


class ExperimentConfig(_Strict):
    """Parameters for every experiment kind; each subcommand reads its own."""

    seeds: list[int] = Field(default_factory=lambda: [0])
    threshold: float = Field(0.9, gt=0)
    hold: int = Field(2, ge=1)
    deltas: list[float] | None = None
    n_directions: int = Field(100, ge=1)
    phase_seeds: list[int] = Field(default_factory=lambda: [0])
    layouts: list[LayoutConfig] = Field(
        default_factory=lambda: [
            LayoutConfig(generator=EntanglementKind.none),
            LayoutConfig(generator=EntanglementKind.random, count=1),
            LayoutConfig(generator=EntanglementKind.ladder),
            LayoutConfig(generator=EntanglementKind.all_to_all),
        ]
    )
    sigmas: list[float] = Field(default_factory=lambda: [0.01, 0.1, 1.0, 10.0])
    train_sigmas: bool = False
    encodings: list[EncodingKind] = Field(
        default_factory=lambda: [
            EncodingKind.constant,
            EncodingKind.linear,
            EncodingKind.binary,
            EncodingKind.ternary,
        ]
    )
    instances: int = Field(100, ge=1)
    profile_samples: int = Field(10, ge=1, description="Random models in the coefficient profile")

    @model_validator(mode="after")
    def check_lists(self) -> "ExperimentConfig":
        if not self.seeds:
            raise ValueError("seeds must not be empty")
        if not self.layouts:
            raise ValueError("layouts must not be empty")
        if not self.sigmas or any(sigma < 0 for sigma in self.sigmas):
            raise ValueError("sigmas must be a non-empty list of non-negative values")
        for layout in self.layouts:
            if layout.generator is EntanglementKind.random and layout.count is None:
                raise ValueError("random layouts need a count")
        return self


class OutputConfig(_Strict):
    directory: str = "runs/default"


class RunConfig(_Strict):
    """Complete, validated description of one run."""

    circuit: CircuitConfig
    init: InitConfig = Field(default_factory=InitConfig)
    target: TargetConfig
    training: TrainingConfig = Field(default_factory=TrainingConfig)
    experiment: ExperimentConfig = Field(default_factory=ExperimentConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)

    @model_validator(mode="wrap")
    @classmethod
    def check_band(cls, data: Any, handler: ModelWrapValidatorHandler["RunConfig"]) -> "RunConfig":
        """Cross-section checks, reported together with any field errors."""
        try:
            config = handler(data)
        except ValidationError as exc:
            cross = _cross_section_errors(_sections_of(data))
            if not cross:
                raise
            field_errors = [
                InitErrorDetails(
                    type=PydanticCustomError(item["type"], item["msg"]),
                    loc=item["loc"],
                    input=item["input"],
                )
                for item in exc.errors()
            ]
            raise ValidationError.from_exception_data(cls.__name__, field_errors + cross) from None
        cross = _cross_section_errors(
            (
                config.circuit,
                config.target,
                (config.training.grid_size, config.training.omega_max_track),
            )
        )
        if cross:
            raise ValidationError.from_exception_data(cls.__name__, cross)
        return config


Band = tuple[int, int]
Sections = tuple[CircuitConfig | None, TargetConfig | None, Band | None]


def _raw_band(training: Any) -> Band | None:
    """``(grid_size, omega_max_track)`` from a training section, even one with other errors."""
    if not isinstance(training, dict):
        return None
    fields = TrainingConfig.model_fields
    grid_size = training.get("grid_size", fields["grid_size"].get_default(call_default_factory=True))
    band = training.get(
        "omega_max_track", fields["omega_max_track"].get_default(call_default_factory=True)
    )
    if type(grid_size) is not int or type(band) is not int:
        return None
    return grid_size, band


def _sections_of(data: Any) -> Sections:
    """Sections of a raw config that validate on their own, plus the raw training band."""
    if not isinstance(data, dict):
        return None, None, None

    def section(model: type[BaseModel], key: str, default: Any) -> Any:
        try:
            return model.model_validate(data.get(key, default))
        except ValidationError:
            return None

    return (
        section(CircuitConfig, "circuit", None),
        section(TargetConfig, "target", None),
        _raw_band(data.get("training", {})),
    )


def _error(loc: tuple[str, ...], message: str, value: Any) -> InitErrorDetails:
    return InitErrorDetails(
        type=PydanticCustomError("run_config", message), loc=loc, input=value
    )


def _cross_section_errors(sections: Sections) -> list[InitErrorDetails]:
    """Nyquist, tracked-band and reachability checks between sections."""
    circuit, target, band = sections
    errors: list[InitErrorDetails] = []
    if band is not None:
        M, omega_max_track = band
        if omega_max_track >= M / 2:
            errors.append(
                _error(
                    ("training", "omega_max_track"),
                    f"must stay below the Nyquist frequency M/2={M / 2}",
                    omega_max_track,
                )
            )
    if target is None:
        return errors
    if band is not None and max(target.frequencies) > band[1]:
        errors.append(
            _error(
                ("target", "frequencies"),
                f"must not exceed training.omega_max_track={band[1]}",
                target.frequencies,
            )
        )
    if circuit is not None:
        try:
            unreachable = _unreachable_frequencies(circuit, target.frequencies)
        except ConfigurationError as exc:
            errors.append(_error(("circuit",), str(exc), circuit.model_dump(mode="json")))
            return errors
        if unreachable:
            errors.append(
                _error(
                    ("target", "frequencies"),
                    f"{unreachable} lie outside the spectrum the observable can see",
                    target.frequencies,
                )
            )
    return errors


def _unreachable_frequencies(circuit: CircuitConfig, frequencies: list[int]) -> list[int]:
    """Targets outside what the measured qubit's light cone can carry."""
    support = reachable_frequencies(circuit_from_config(circuit))
    return [omega for omega in frequencies if not np.any(np.isclose(support, omega))]


# ============== Profiles ==============
PROFILES: dict[Profile, dict[str, Any]] = {
    Profile.desk: {
        "circuit": {"n": 3, "L": 4, "encoding": "constant", "entanglement": "ladder"},
        "init": {"sigma": 0.01, "seed": 0},
        "target": {"frequencies": [1, 2, 3, 4, 5, 6], "phase_seed": 0},
        "training": {
            "lr": 0.005,
            "epochs": 3000,
            "eval_every": 5,
            "grid_size": 256,
            "omega_max_track": 16,
        },
        "experiment": {"seeds": [0, 1, 2], "instances": 100},
        "output": {"directory": "runs/desk"},
    },
    Profile.full: {
        "circuit": {"n": 5, "L": 20, "encoding": "constant", "entanglement": "ladder"},
        "init": {"sigma": 0.01, "seed": 0},
        "target": {"frequencies": [5, 10, 15, 20, 25, 30, 35, 40, 45, 50], "phase_seed": 0},
        "training": {
            "lr": 0.0005,
            "epochs": 3000,
            "eval_every": 5,
            "grid_size": 2048,
            "omega_max_track": 100,
        },
        "experiment": {"seeds": list(range(10)), "instances": 100},
        "output": {"directory": "runs/full"},
    },
}


def _merge(base: dict[str, Any], override: dict[str, Any]) -> dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def _override_seeds(data: dict[str, Any], seed: int) -> dict[str, Any]:
    """Rewrite every seed in a raw config tree; seed lists become ``seed, seed+1, ...``."""
    data = copy.deepcopy(data)
    data.setdefault("init", {})["seed"] = seed
    data.setdefault("target", {})["phase_seed"] = seed
    circuit = data.get("circuit", {})
    if circuit.get("entanglement_seed") is not None:
        circuit["entanglement_seed"] = seed
    experiment = data.setdefault("experiment", {})
    for key in ("seeds", "phase_seeds"):
        count = len(experiment.get(key) or [0])
        experiment[key] = [seed + i for i in range(count)]
    return data


def _violations(error: ValidationError) -> list[str]:
    lines = []
    for item in error.errors():
        loc = ".".join(str(part) for part in item["loc"]) or "<root>"
        lines.append(f"{loc}: {item['msg']}")
    return lines


def validate_config(
    data: dict[str, Any],
    profile: Profile | str | None = None,
    seed_override: int | None = None,
) -> RunConfig:
    """Validate a raw config tree, filling unset fields from a profile.

    Raises:
        ConfigurationError: With every schema violation in ``violations``.
    """
    if not isinstance(data, dict):
        raise ConfigurationError("Config root must be a JSON object")
    if profile is not None:
        data = _merge(PROFILES[Profile(profile)], data)
    if seed_override is not None:
        data = _override_seeds(data, seed_override)
    try:
        return RunConfig.model_validate(data)
    except ValidationError as exc:
        violations = _violations(exc)
        raise ConfigurationError(
            "Invalid run config:\n" + "\n".join(f"- {line}" for line in violations),
            violations=violations,
        ) from exc


def parse_config_text(
    text: str, profile: Profile | str | None = None, seed_override: int | None = None
) -> RunConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"Malformed config JSON: {exc}") from exc
    return validate_config(data, profile, seed_override)


def parse_config(
    path: str | Path, profile: Profile | str | None = None, seed_override: int | None = None
) -> RunConfig:
    """Load and validate a JSON run config.

    Args:
        path: Config file.
        profile: Preset filling any field the file leaves unset.
        seed_override: Replacement for every seed in the config.

    Returns:
        Validated config.

    Raises:
        PersistenceError: If the file cannot be read.
        ConfigurationError: On malformed JSON or schema violations.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise PersistenceError(f"Cannot read config {path}: {exc}") from exc
    logger.debug(f"Loaded config {path}")
    return parse_config_text(text, profile, seed_override)


def profile_config(profile: Profile | str, seed_override: int | None = None) -> RunConfig:
    """Config made entirely of a profile's presets."""
    return validate_config({}, profile, seed_override)


def dump_config(config: RunConfig) -> str:
    """Canonical JSON text; ``parse_config_text`` reads it back to an equal config."""
    return json.dumps(config.model_dump(mode="json"), sort_keys=True, indent=2)


def config_hash(config: RunConfig) -> str:
    payload = json.dumps(
        config.model_dump(mode="json"), sort_keys=True, separators=(",", ":")
    ).encode("utf-8")
    return hashlib.sha256(payload).hexdigest()

"""Exception hierarchy and process exit codes."""


class SpectralLabError(Exception):
    """Base error for all failures surfaced by the lab."""

    exit_code: int = 1


class ConfigurationError(SpectralLabError, ValueError):
    """Invalid circuit layout, config file or call arguments."""

    exit_code = 2

    def __init__(self, message: str, violations: list[str] | None = None) -> None:
        super().__init__(message)
        self.violations = violations or []


class AliasingError(ConfigurationError):
    """Tracked band reaches the Nyquist limit of the sampling grid."""


class UnsupportedLatticeError(ConfigurationError):
    """Encoding scales cannot be hosted on the half-integer frequency lattice."""


class NumericError(SpectralLabError, ArithmeticError):
    """Non-finite angles, losses or coefficients."""

    exit_code = 3


class SizeError(SpectralLabError):
    """Instance too large for an exhaustive oracle."""

    exit_code = 4


class PersistenceError(SpectralLabError, OSError):
    """Failure while reading or writing run artifacts."""

    exit_code = 5


class InsufficientSamplesWarning(UserWarning):
    """Monte Carlo estimate built from too few samples."""

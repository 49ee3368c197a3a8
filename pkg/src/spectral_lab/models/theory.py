"""Report types for bound verification and Gaussian-moment statistics."""

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class BoundRow:
    """One (parameter, frequency) check of an inequality."""

    k: int
    omega: float
    lhs: float
    rhs: float

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs


@dataclass
class BoundReport:
    """Collection of bound checks; passes when no row violates the tolerance."""

    rows: list[BoundRow] = field(default_factory=list)
    tolerance: float = 1e-9

    @property
    def violations(self) -> int:
        return sum(1 for row in self.rows if row.slack < -self.tolerance)

    @property
    def min_slack(self) -> float:
        return min((row.slack for row in self.rows), default=float("inf"))

    def passed(self) -> bool:
        return self.violations == 0

    def extend(self, other: "BoundReport") -> None:
        self.rows.extend(other.rows)


@dataclass(frozen=True)
class MomentTable:
    """Absolute Gaussian moments ``M_r(sigma)``."""

    sigma: float
    entries: dict[int, float]


@dataclass(frozen=True, eq=False)
class SmallAngleStats:
    """Monte Carlo statistics of coefficient gradients at one sigma."""

    sigma: float
    omegas: np.ndarray
    mean_abs: np.ndarray
    rms: np.ndarray
    n_samples: int

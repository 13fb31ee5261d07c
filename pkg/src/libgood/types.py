"""Common data types, enums and constants for libgood."""

import math
from dataclasses import dataclass
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, field_validator

from libgood.exceptions import DomainError


class Regime(str, Enum):
    """Evaluation regime used for the polylogarithm normalizer."""

    SERIES = "series"
    WOOD = "wood"  # Large negative s asymptotic form


class DispersionKind(str, Enum):
    """Dispersion relative to the Poisson benchmark."""

    UNDER = "under"
    EQUI = "equi"
    OVER = "over"


# Numerical constants
WOOD_THRESHOLD = -120.0  # s strictly below this uses the asymptotic regime
SERIES_LOG_TOLERANCE = 36.0  # Stop once ln(term) < ln(sum) - 36 past the peak
SERIES_MAX_TERMS = 10_000_000
QUANTILE_MAX_SUPPORT = 10_000_000
QUANTILE_MASS_CEILING = 1.0 - 1e-15
DEFAULT_TH = 1e-6

# Output constants
SCHEMA_VERSION = 1


@dataclass(frozen=True)
class LogPolylogValue:
    """Natural log of F(z, s) tagged with the regime that produced it."""

    value: float
    regime: Regime
    terms_used: int = 0

    @property
    def linear(self) -> float:
        """F(z, s) in linear space (may overflow to inf for extreme inputs)."""
        try:
            return math.exp(self.value)
        except OverflowError:
            return math.inf


class GoodParams(BaseModel):
    """Parameters (z, s) of a Good distribution, carried as log(z)."""

    model_config = ConfigDict(frozen=True)

    log_z: float = Field(lt=0.0)
    s: float

    @field_validator("log_z", "s")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("must be finite")
        return value

    @classmethod
    def from_z(cls, z: float, s: float) -> "GoodParams":
        """Build parameters from z in (0, 1).

        Raises:
            DomainError: If z is outside (0, 1)
        """
        if not 0.0 < z < 1.0:
            raise DomainError(f"z must lie in (0, 1), got {z}")
        return cls(log_z=math.log(z), s=s)

    @property
    def z(self) -> float:
        """Parameter z in linear space."""
        return math.exp(self.log_z)

"""Embedded count datasets and CSV ingestion."""

import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from libgood.exceptions import DataError, UnknownDatasetError
from libgood.inference import ModelData

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DatasetRegistryEntry:
    """A dataset stored as its observed frequency table."""

    name: str
    frequencies: dict[int, int]
    description: str
    source: str

    @property
    def observations(self) -> np.ndarray:
        values = np.fromiter(self.frequencies.keys(), dtype=np.int64)
        counts = np.fromiter(self.frequencies.values(), dtype=np.int64)
        return np.repeat(values, counts)

    @property
    def n(self) -> int:
        return sum(self.frequencies.values())

    def model_data(self) -> ModelData:
        return ModelData(self.observations, response_name=self.name)


_REGISTRY: dict[str, DatasetRegistryEntry] = {
    entry.name: entry
    for entry in (
        DatasetRegistryEntry(
            name="discoveries",
            frequencies={
                0: 9, 1: 12, 2: 26, 3: 20, 4: 12, 5: 7, 6: 6, 7: 4, 8: 1, 9: 1, 10: 1, 11: 0, 12: 1
            },
            description="Yearly numbers of great inventions and scientific discoveries, 1860-1959",
            source="R package datasets (discoveries)",
        ),
        DatasetRegistryEntry(
            name="strikes",
            frequencies={0: 46, 1: 76, 2: 24, 3: 9, 4: 1},
            description=(
                "Outbreaks of strikes per 4-week period in UK coal mining, "
                "1948-1959 (4+ taken as 4)"
            ),
            source="Published frequency table",
        ),
        DatasetRegistryEntry(
            name="polarbears",
            frequencies={1: 76, 2: 147, 3: 8},
            description="Polar bear litter sizes at Svalbard, 1992-2017",
            source="Published frequency table",
        ),
    )
}


def list_datasets() -> list[DatasetRegistryEntry]:
    return list(_REGISTRY.values())


def get_dataset(name: str) -> DatasetRegistryEntry:
    """Look up a registry entry.

    Raises:
        UnknownDatasetError: If name is not registered
    """
    try:
        return _REGISTRY[name]
    except KeyError:
        raise UnknownDatasetError(name, sorted(_REGISTRY)) from None


def dataset(name: str) -> np.ndarray:
    """Expanded observation vector of a registered dataset."""
    return get_dataset(name).observations


def _parse_count(raw: str, column: str, row: int) -> int:
    try:
        value = float(raw)
    except ValueError:
        raise DataError(f"Response '{column}' value '{raw}' is not a number", row) from None
    if not math.isfinite(value) or value != math.floor(value):
        raise DataError(f"Response '{column}' value '{raw}' is not an integer", row)
    if value < 0:
        raise DataError(f"Response '{column}' value '{raw}' is negative", row)
    return int(value)


def _parse_real(raw: str, column: str, row: int) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise DataError(f"Covariate '{column}' value '{raw}' is not a number", row) from None
    if not math.isfinite(value):
        raise DataError(f"Covariate '{column}' value '{raw}' is not finite", row)
    return value


def _read_frame(path: Path, delimiter: str, columns: list[str]) -> pd.DataFrame:
    try:
        frame = pd.read_csv(
            path,
            sep=delimiter,
            dtype=str,
            keep_default_na=False,
            encoding="utf-8",
            skipinitialspace=True,
        )
    except FileNotFoundError:
        raise DataError(f"CSV file not found: {path}") from None
    except OSError as e:
        raise DataError(f"Cannot read {path}: {e.strerror}") from None
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise DataError(f"Cannot parse {path}: {e}") from None

    missing = [c for c in columns if c not in frame.columns]
    if missing:
        raise DataError(
            f"Missing column(s) {', '.join(missing)}; available: {', '.join(frame.columns)}"
        )
    if frame.empty:
        raise DataError(f"{path} has no data rows")
    return frame


def _covariate_matrix(frame: pd.DataFrame, covariates: list[str]) -> np.ndarray:
    x = np.empty((len(frame), len(covariates)))
    for j, column in enumerate(covariates):
        for i, raw in enumerate(frame[column]):
            x[i, j] = _parse_real(raw.strip(), column, i + 1)
    return x


def load_csv(
    path: str | Path,
    response: str,
    covariates: list[str] | None = None,
    delimiter: str = ",",
) -> ModelData:
    """Load a response column and covariate columns from a headed CSV file.

    Rows are numbered from 1 for the first data row (the header is not counted).

    Args:
        path: CSV file (UTF-8, first row is the header)
        response: Column holding non-negative integer counts
        covariates: Covariate columns, in design-matrix order
        delimiter: Field separator

    Raises:
        DataError: On a missing file or column, or an unparseable value
    """
    covariates = list(covariates or [])
    frame = _read_frame(Path(path), delimiter, [response, *covariates])

    y = np.array(
        [_parse_count(raw.strip(), response, i + 1) for i, raw in enumerate(frame[response])],
        dtype=np.int64,
    )
    x = _covariate_matrix(frame, covariates)

    logger.info(
        "Loaded %d rows from %s (response=%s, covariates=%s)", len(y), path, response, covariates
    )
    return ModelData(y, x, tuple(covariates), response_name=response)


def load_covariates(path: str | Path, covariates: list[str], delimiter: str = ",") -> np.ndarray:
    """Load only covariate columns, for prediction on new data."""
    frame = _read_frame(Path(path), delimiter, list(covariates))
    return _covariate_matrix(frame, list(covariates))

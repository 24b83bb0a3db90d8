"""
UJIIndoorLoc CSV ingestion.
"""

import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import List

import numpy as np
import pandas as pd

from ..exceptions import EmptySelectionError, RowParseError, SchemaError


logger = logging.getLogger(__name__)

N_ACCESS_POINTS = 520
NOT_DETECTED = 100.0
WAP_COLUMNS = [f"WAP{i:03d}" for i in range(1, N_ACCESS_POINTS + 1)]
META_COLUMNS = [
    "LONGITUDE",
    "LATITUDE",
    "FLOOR",
    "BUILDINGID",
    "SPACEID",
    "RELATIVEPOSITION",
    "USERID",
    "PHONEID",
    "TIMESTAMP",
]
EXPECTED_COLUMNS = WAP_COLUMNS + META_COLUMNS
INTEGER_COLUMNS = META_COLUMNS[2:]


@dataclass(frozen=True, eq=False)
class RssSample:
    """One fingerprint row of the database."""

    rss: np.ndarray
    longitude: float
    latitude: float
    floor: int
    building: int
    space_id: int
    relative_position: int = 0
    user_id: int = 0
    phone_id: int = 0
    timestamp: int = 0


def _first_bad_row(numeric: pd.DataFrame) -> tuple[int, str]:
    bad = numeric.isna()
    row = int(np.flatnonzero(bad.any(axis=1).to_numpy())[0])
    column = str(bad.columns[bad.iloc[row].to_numpy()][0])
    return row, column


def load_ujiindoorloc(path: str | Path) -> List[RssSample]:
    """
    Read a UJIIndoorLoc CSV (training or validation file).

    Args:
        path: CSV with header WAP001..WAP520, LONGITUDE, ..., TIMESTAMP

    Returns:
        One RssSample per data row, in file order

    Raises:
        SchemaError: Expected columns are missing, the file is empty or not UTF-8
        RowParseError: A field is not numeric (row index is 0-based over data rows)
    """
    path = Path(path)
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    except pd.errors.EmptyDataError as e:
        raise SchemaError(f"{path} has no header row", missing=EXPECTED_COLUMNS) from e
    except UnicodeDecodeError as e:
        raise SchemaError(f"{path} is not UTF-8 text: {e.reason} at byte {e.start}") from e
    except pd.errors.ParserError as e:
        match = re.search(r"line (\d+)", str(e))
        row = int(match.group(1)) - 2 if match else -1
        raise RowParseError(f"Malformed row {row} in {path}: {e}", row_index=row, column="") from e

    return parse_ujiindoorloc_frame(frame, source=str(path))


def parse_ujiindoorloc_frame(frame: pd.DataFrame, source: str = "<frame>") -> List[RssSample]:
    """
    Validate and convert a string-typed UJIIndoorLoc table.

    Args:
        frame: Table read with every column as text
        source: Name used in error messages

    Returns:
        One RssSample per row
    """
    frame = frame.copy()
    frame.columns = [str(column).strip() for column in frame.columns]
    missing = [column for column in EXPECTED_COLUMNS if column not in frame.columns]
    if missing:
        raise SchemaError(
            f"{source} is missing {len(missing)} column(s): {', '.join(missing)}",
            missing=missing,
        )
    if frame.empty:
        logger.info(f"{source} holds no data rows")
        return []

    numeric = frame[EXPECTED_COLUMNS].apply(
        lambda column: pd.to_numeric(column.str.strip(), errors="coerce")
    )
    if numeric.isna().to_numpy().any():
        row, column = _first_bad_row(numeric)
        raw = frame[column].iloc[row]
        raise RowParseError(
            f"Row {row} (line {row + 2}) of {source}: {column}={raw!r} is not numeric",
            row_index=row,
            column=column,
        )

    integers = numeric[INTEGER_COLUMNS].to_numpy()
    fractional = integers != np.round(integers)
    if fractional.any():
        row = int(np.flatnonzero(fractional.any(axis=1))[0])
        column = INTEGER_COLUMNS[int(np.flatnonzero(fractional[row])[0])]
        raise RowParseError(
            f"Row {row} (line {row + 2}) of {source}: {column} must be an integer",
            row_index=row,
            column=column,
        )

    rss = numeric[WAP_COLUMNS].to_numpy(dtype=np.float64)
    meta = numeric[META_COLUMNS].to_numpy(dtype=np.float64)
    samples = [
        RssSample(
            rss=rss[i],
            longitude=float(meta[i, 0]),
            latitude=float(meta[i, 1]),
            floor=int(meta[i, 2]),
            building=int(meta[i, 3]),
            space_id=int(meta[i, 4]),
            relative_position=int(meta[i, 5]),
            user_id=int(meta[i, 6]),
            phone_id=int(meta[i, 7]),
            timestamp=int(meta[i, 8]),
        )
        for i in range(rss.shape[0])
    ]
    logger.info(f"Loaded {len(samples)} samples from {source}")
    return samples


def filter_building_floor(
    samples: List[RssSample], building: int, floor: int
) -> List[RssSample]:
    """
    Keep the samples recorded on one floor of one building, order preserved.

    Raises:
        EmptySelectionError: Nothing matched
    """
    selected = [s for s in samples if s.building == building and s.floor == floor]
    if not selected:
        raise EmptySelectionError(
            f"No samples on building {building}, floor {floor} (of {len(samples)})"
        )
    logger.info(f"Selected {len(selected)} of {len(samples)} samples (building {building}, floor {floor})")
    return selected

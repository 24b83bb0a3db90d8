"""
Synthetic UJIIndoorLoc-format fingerprints.

Rooms sit on a grid, access points are scattered over the floor, and readings
follow a log-distance path-loss model with Gaussian shadowing. Readings weaker
than the detection threshold are written as the not-detected sentinel 100.
Used as a bundled fixture when the public database is not available.
"""

import math
from pathlib import Path
from typing import List

import numpy as np
import pandas as pd

from ..utils.file_utils import ensure_directory
from .ujiindoorloc import EXPECTED_COLUMNS, N_ACCESS_POINTS, RssSample, parse_ujiindoorloc_frame

ORIGIN_LONGITUDE = -7600.0
ORIGIN_LATITUDE = 4864900.0
ROOM_SPACING_M = 8.0
TX_POWER_DBM = -35.0
PATH_LOSS_EXPONENT = 3.0
SHADOWING_DB = 4.0
DETECTION_THRESHOLD_DBM = -100.0


def synthetic_ujiindoorloc(
    n_rooms: int = 24,
    samples_per_room: int = 30,
    n_access_points: int = N_ACCESS_POINTS,
    building: int = 1,
    floor: int = 1,
    other_floor_samples: int = 20,
    seed: int = 7,
) -> pd.DataFrame:
    """
    Generate a table with the UJIIndoorLoc column layout.

    Args:
        n_rooms: Rooms on the surveyed floor
        samples_per_room: Fingerprints recorded per room
        n_access_points: Access points that can be heard (the rest are never detected)
        building: BUILDINGID of the surveyed floor
        floor: FLOOR of the surveyed floor
        other_floor_samples: Extra rows on floor + 1, for filter tests
        seed: Generator seed

    Returns:
        Numeric DataFrame with columns WAP001..WAP520 and the metadata columns
    """
    rng = np.random.default_rng(seed)
    grid = math.ceil(math.sqrt(n_rooms))
    room_xy = np.asarray(
        [((r % grid) * ROOM_SPACING_M, (r // grid) * ROOM_SPACING_M) for r in range(n_rooms)]
    )
    extent = ROOM_SPACING_M * grid
    n_heard = min(n_access_points, N_ACCESS_POINTS)
    ap_xy = rng.uniform(-ROOM_SPACING_M, extent, size=(n_heard, 2))

    def readings(positions: np.ndarray) -> np.ndarray:
        distance = np.linalg.norm(positions[:, np.newaxis, :] - ap_xy[np.newaxis, :, :], axis=2)
        rss = TX_POWER_DBM - 10.0 * PATH_LOSS_EXPONENT * np.log10(np.maximum(distance, 1.0))
        rss = np.round(rss + rng.normal(0.0, SHADOWING_DB, size=rss.shape))
        rss = np.clip(rss, -104.0, 0.0)
        rss[rss < DETECTION_THRESHOLD_DBM] = 100.0
        full = np.full((positions.shape[0], N_ACCESS_POINTS), 100.0)
        full[:, :n_heard] = rss
        return full

    rows = []
    room_of = np.repeat(np.arange(n_rooms), samples_per_room)
    positions = room_xy[room_of] + rng.uniform(-2.0, 2.0, size=(room_of.size, 2))
    rows.append(_rows(readings(positions), positions, room_of, building, floor))

    if other_floor_samples:
        extra_room = rng.integers(0, n_rooms, size=other_floor_samples)
        extra_pos = room_xy[extra_room] + rng.uniform(-2.0, 2.0, size=(other_floor_samples, 2))
        rows.append(_rows(readings(extra_pos), extra_pos, extra_room, building, floor + 1))

    frame = pd.concat(rows, ignore_index=True)
    frame["TIMESTAMP"] = 1371700000 + np.arange(len(frame), dtype=np.int64)
    return frame[EXPECTED_COLUMNS]


def _rows(
    rss: np.ndarray, positions: np.ndarray, rooms: np.ndarray, building: int, floor: int
) -> pd.DataFrame:
    frame = pd.DataFrame(rss.astype(np.int64), columns=EXPECTED_COLUMNS[:N_ACCESS_POINTS])
    frame["LONGITUDE"] = ORIGIN_LONGITUDE + positions[:, 0]
    frame["LATITUDE"] = ORIGIN_LATITUDE + positions[:, 1]
    frame["FLOOR"] = floor
    frame["BUILDINGID"] = building
    frame["SPACEID"] = 100 + rooms
    frame["RELATIVEPOSITION"] = 2
    frame["USERID"] = 1 + rooms % 18
    frame["PHONEID"] = 1 + rooms % 24
    frame["TIMESTAMP"] = 0
    return frame


def write_ujiindoorloc_csv(frame: pd.DataFrame, path: Path) -> Path:
    """Write a table in the database's CSV layout."""
    path = Path(path)
    ensure_directory(path.parent)
    frame.to_csv(path, index=False, lineterminator="\n")
    return path


def synthetic_samples(**kwargs) -> List[RssSample]:
    """Synthetic table parsed into samples (keywords as in :func:`synthetic_ujiindoorloc`)."""
    return parse_ujiindoorloc_frame(synthetic_ujiindoorloc(**kwargs).astype(str), source="<synthetic>")

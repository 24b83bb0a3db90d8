"""
UJIIndoorLoc ingestion, room clustering, scaling and splitting.
"""

from .pipeline import PreparedData, check_dataset_source, load_floor_samples, prepare_area_dataset
from .preprocessing import (
    AreaDataset,
    build_area_dataset,
    normalize_features,
    normalize_rss,
    split_train_test,
)
from .rooms import RoomClustering, cluster_rooms
from .store import load_area_dataset, save_area_dataset, write_label_map_report
from .synthetic import synthetic_samples, synthetic_ujiindoorloc, write_ujiindoorloc_csv
from .ujiindoorloc import (
    EXPECTED_COLUMNS,
    RssSample,
    filter_building_floor,
    load_ujiindoorloc,
    parse_ujiindoorloc_frame,
)

__all__ = [
    "AreaDataset",
    "EXPECTED_COLUMNS",
    "PreparedData",
    "RoomClustering",
    "RssSample",
    "build_area_dataset",
    "check_dataset_source",
    "cluster_rooms",
    "filter_building_floor",
    "load_area_dataset",
    "load_floor_samples",
    "load_ujiindoorloc",
    "normalize_features",
    "normalize_rss",
    "parse_ujiindoorloc_frame",
    "prepare_area_dataset",
    "save_area_dataset",
    "split_train_test",
    "synthetic_samples",
    "synthetic_ujiindoorloc",
    "write_label_map_report",
    "write_ujiindoorloc_csv",
]

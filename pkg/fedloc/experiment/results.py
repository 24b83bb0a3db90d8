"""
Result tables written by the evaluate and sweep commands.
"""

from pathlib import Path
from typing import Dict, List, Optional, Tuple

import pandas as pd

from ..utils.file_utils import write_frame
from .runner import MetricsRecord, RunOutcome
from .sweep import RateRecord

RUNS_FILE = "runs.csv"
SUMMARY_FILE = "summary.csv"
RATES_FILE = "rates.csv"


def runs_frame(
    strategies: List[str], sweep_axis: str, outcomes: List[Tuple[Optional[float], RunOutcome]]
) -> pd.DataFrame:
    """One row per (sweep value, run, strategy); failed runs keep an empty accuracy."""
    rows = []
    for value, outcome in outcomes:
        for strategy in strategies:
            rows.append(
                {
                    "strategy": strategy,
                    "sweep_axis": sweep_axis,
                    "sweep_value": value,
                    "run": outcome.run_index,
                    "accuracy": outcome.accuracies.get(strategy),
                    "status": "ok" if not outcome.failed else f"failed ({outcome.error})",
                }
            )
    return pd.DataFrame(
        rows, columns=["strategy", "sweep_axis", "sweep_value", "run", "accuracy", "status"]
    )


def summary_frame(records: List[MetricsRecord]) -> pd.DataFrame:
    return pd.DataFrame(
        [
            {
                "strategy": record.strategy,
                "sweep_axis": record.sweep_axis,
                "sweep_value": record.sweep_value,
                "mean": record.mean,
                "std": record.std,
                "n_runs": record.n_runs,
                "n_failed": record.n_failed,
            }
            for record in records
        ],
        columns=["strategy", "sweep_axis", "sweep_value", "mean", "std", "n_runs", "n_failed"],
    )


def rates_frame(rates: List[RateRecord]) -> pd.DataFrame:
    return pd.DataFrame(
        [vars(rate) for rate in rates], columns=["sweep_axis", "sweep_value", "rate", "value"]
    )


def write_results(
    output_dir: Path,
    strategies: List[str],
    sweep_axis: str,
    outcomes: List[Tuple[Optional[float], RunOutcome]],
    records: List[MetricsRecord],
    rates: Optional[List[RateRecord]] = None,
) -> Dict[str, Path]:
    """Write runs.csv, summary.csv and, when rates are given, rates.csv."""
    output_dir = Path(output_dir)
    paths = {
        RUNS_FILE: write_frame(runs_frame(strategies, sweep_axis, outcomes), output_dir / RUNS_FILE),
        SUMMARY_FILE: write_frame(summary_frame(records), output_dir / SUMMARY_FILE),
    }
    if rates is not None:
        paths[RATES_FILE] = write_frame(rates_frame(rates), output_dir / RATES_FILE)
    return paths

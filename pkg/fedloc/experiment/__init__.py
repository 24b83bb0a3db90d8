"""
Monte-Carlo harness: strategy evaluation, sweeps and plot data.
"""

from .evaluation import evaluate_strategy, sample_client_test_sets
from .histograms import PosteriorHistograms, emit_posterior_histograms
from .results import rates_frame, runs_frame, summary_frame, write_results
from .runner import (
    MODEL_FAMILY,
    MetricsRecord,
    MonteCarloResult,
    PartitionedRun,
    RunArtifacts,
    RunOutcome,
    evaluate_run,
    execute_run,
    families_for,
    partition_run,
    run_monte_carlo,
    run_seeds,
    run_streams,
    train_run,
)
from .sweep import RateRecord, SweepResult, config_at, rate_records, sweep

__all__ = [
    "MODEL_FAMILY",
    "MetricsRecord",
    "MonteCarloResult",
    "PartitionedRun",
    "PosteriorHistograms",
    "RateRecord",
    "RunArtifacts",
    "RunOutcome",
    "SweepResult",
    "config_at",
    "emit_posterior_histograms",
    "evaluate_run",
    "evaluate_strategy",
    "execute_run",
    "families_for",
    "partition_run",
    "rate_records",
    "rates_frame",
    "run_monte_carlo",
    "run_seeds",
    "run_streams",
    "runs_frame",
    "sample_client_test_sets",
    "summary_frame",
    "sweep",
    "train_run",
    "write_results",
]

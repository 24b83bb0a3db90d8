"""
Sweeps over L, M, sigma or lambda_tilde.

Every sweep point reuses the master seed, so points differ only in the swept
parameter. sigma and lambda_tilde sweeps also report FedAMP-F accuracy
relative to GM and FedAvg.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from ..config.config_models import ExperimentConfig, Strategy, SweepConfig
from ..data.pipeline import prepare_area_dataset
from ..data.preprocessing import AreaDataset
from ..exceptions import ConfigError, ParameterError
from ..utils.logging_utils import LogContext
from .runner import MetricsRecord, MonteCarloResult, RunOutcome, run_monte_carlo


logger = logging.getLogger(__name__)

RATE_BASELINES = (Strategy.GM, Strategy.FEDAVG)


@dataclass(frozen=True)
class RateRecord:
    sweep_axis: str
    sweep_value: float
    rate: str
    value: float


@dataclass
class SweepResult:
    """Records of every sweep point, in sweep order."""

    axis: str
    points: List[Tuple[Optional[float], MonteCarloResult]] = field(default_factory=list)
    rates: List[RateRecord] = field(default_factory=list)

    @property
    def records(self) -> List[MetricsRecord]:
        return [record for _, result in self.points for record in result.records]

    @property
    def outcomes(self) -> List[Tuple[Optional[float], RunOutcome]]:
        return [(value, outcome) for value, result in self.points for outcome in result.outcomes]


def _integral(axis: str, value: float) -> int:
    if value != int(value) or value < 1:
        raise ParameterError(f"Sweep over {axis} needs positive integers, got {value}")
    return int(value)


def config_at(config: ExperimentConfig, axis: str, value: float) -> ExperimentConfig:
    """Copy of ``config`` with the swept parameter set to ``value``."""
    if axis == "L":
        return config.model_copy(update={"n_labels": _integral(axis, value)})
    if axis == "M":
        return config.model_copy(update={"n_clients": _integral(axis, value)})
    if axis == "sigma":
        if value <= 0:
            raise ParameterError(f"sigma must be > 0, got {value}")
        return config.model_copy(
            update={"federation": config.federation.model_copy(update={"sigma": float(value)})}
        )
    if axis == "lambda":
        if value < 0:
            raise ParameterError(f"lambda_tilde must be >= 0, got {value}")
        return config.model_copy(
            update={"federation": config.federation.model_copy(update={"lambda_tilde": float(value)})}
        )
    raise ConfigError(f"Unknown sweep axis '{axis}'")


def rate_records(axis: str, value: float, records: List[MetricsRecord]) -> List[RateRecord]:
    """FedAMP-F mean accuracy divided by the GM and FedAvg means."""
    means: Dict[str, float] = {record.strategy: record.mean for record in records}
    numerator = means.get(Strategy.FEDAMP_F.value)
    rates = []
    for baseline in RATE_BASELINES:
        denominator = means.get(baseline.value)
        if numerator is None or denominator is None:
            continue
        ratio = numerator / denominator if denominator > 0 else float("nan")
        rates.append(RateRecord(axis, value, f"{Strategy.FEDAMP_F.value}/{baseline.value}", ratio))
    return rates


def sweep(
    config: ExperimentConfig,
    sweep_config: Optional[SweepConfig] = None,
    workers: int = 1,
    dataset: Optional[AreaDataset] = None,
) -> SweepResult:
    """
    run_monte_carlo at every value of the sweep axis.

    Args:
        config: Base experiment configuration
        sweep_config: Axis and values; ``config.sweep`` when omitted
        workers: Worker processes per Monte-Carlo batch
        dataset: Prepared dataset reused across points (ignored for L sweeps)

    Returns:
        SweepResult

    Raises:
        ConfigError: No sweep configured
    """
    sweep_config = sweep_config or config.sweep
    if sweep_config is None:
        raise ConfigError("No sweep configured (set sweep.axis and sweep.values)")
    axis = sweep_config.axis
    if axis == "L":
        dataset = None
    elif dataset is None:
        dataset = prepare_area_dataset(config.dataset, config.n_labels).dataset

    if axis in ("sigma", "lambda") and (
        Strategy.FEDAMP_F not in config.strategies
        or not set(RATE_BASELINES) & set(config.strategies)
    ):
        logger.warning("Rate curves need FEDAMP-F and GM or FEDAVG among the strategies")

    result = SweepResult(axis=axis)
    for value in sweep_config.values:
        point = config_at(config, axis, value)
        with LogContext(logger, f"sweep point {axis}={value}"):
            point_data = dataset or prepare_area_dataset(point.dataset, point.n_labels).dataset
            outcome = run_monte_carlo(point, point_data, workers, sweep_axis=axis, sweep_value=value)
        result.points.append((value, outcome))
        if axis in ("sigma", "lambda"):
            result.rates.extend(rate_records(axis, value, outcome.records))
    return result

"""
Monte-Carlo harness.

Run r derives its own SeedSequence from the master seed and spawns separate
streams for the train/test split, the partition, the network initialization,
local training and per-client test resampling. Runs share nothing mutable,
so they can execute in worker processes; results are ordered by run index.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..config.config_models import ExperimentConfig, FederationStrategy, Strategy
from ..data.pipeline import prepare_area_dataset
from ..data.preprocessing import AreaDataset, split_train_test
from ..exceptions import ContractViolationError, FedLocError, category_for
from ..federation.aggregation import ClientState
from ..federation.history import FederationHistory
from ..federation.server import run_fedamp, run_fedavg, train_gm, train_lm
from ..fusion.bayes import ClassPrior
from ..models.mlp import MlpParams, init_params
from ..partition.dirichlet import ClientLabelDistribution, GroupSpec, draw_client_distributions
from ..partition.partitioner import partition
from ..utils.logging_utils import LogContext
from .evaluation import evaluate_strategy, sample_client_test_sets


logger = logging.getLogger(__name__)

# strategies that share one set of trained models
MODEL_FAMILY = {
    Strategy.GM: "GM",
    Strategy.LM: "LM",
    Strategy.LM_F: "LM",
    Strategy.FEDAVG: "FEDAVG",
    Strategy.FEDAMP: "FEDAMP",
    Strategy.FEDAMP_F: "FEDAMP",
}


STREAMS = ("split", "partition", "init", "train", "test")


@dataclass(frozen=True, eq=False)
class PartitionedRun:
    """Train/test split of one run and its client shards."""

    train: AreaDataset
    test: AreaDataset
    spec: GroupSpec
    distributions: List[ClientLabelDistribution]
    client_data: List[AreaDataset]


@dataclass(frozen=True, eq=False)
class RunArtifacts:
    """Everything one Monte-Carlo run trained and will be scored on."""

    run_index: int
    train: AreaDataset
    test: AreaDataset
    distributions: List[ClientLabelDistribution]
    client_data: List[AreaDataset]
    client_tests: List[AreaDataset]
    prior: ClassPrior
    models: Dict[str, List[MlpParams]]
    histories: Dict[str, FederationHistory] = field(default_factory=dict)


@dataclass(frozen=True)
class RunOutcome:
    """Accuracies of one run, or the error that stopped it."""

    run_index: int
    accuracies: Dict[str, float]
    error: Optional[str] = None

    @property
    def failed(self) -> bool:
        return self.error is not None


@dataclass(frozen=True)
class MetricsRecord:
    """Per-run accuracies of one strategy at one sweep value."""

    strategy: str
    sweep_axis: str
    sweep_value: Optional[float]
    accuracies: Tuple[float, ...]
    n_failed: int = 0

    @property
    def n_runs(self) -> int:
        return len(self.accuracies)

    @property
    def mean(self) -> float:
        return float(np.mean(self.accuracies)) if self.accuracies else float("nan")

    @property
    def std(self) -> float:
        # population standard deviation
        return float(np.std(self.accuracies)) if self.accuracies else float("nan")


@dataclass(frozen=True)
class MonteCarloResult:
    outcomes: List[RunOutcome]
    records: List[MetricsRecord]

    @property
    def n_failed(self) -> int:
        return sum(outcome.failed for outcome in self.outcomes)


def run_seeds(master_seed: int, n_runs: int) -> List[np.random.SeedSequence]:
    return np.random.SeedSequence(master_seed).spawn(n_runs)


def run_streams(seed: np.random.SeedSequence) -> Dict[str, np.random.SeedSequence]:
    """Named child streams of a run seed, derived without mutating it."""
    return {
        name: np.random.SeedSequence(
            seed.entropy, spawn_key=tuple(seed.spawn_key) + (i,), pool_size=seed.pool_size
        )
        for i, name in enumerate(STREAMS)
    }


def _as_int_seed(seq: np.random.SeedSequence) -> int:
    return int(seq.generate_state(1, dtype=np.uint32)[0])


def families_for(strategies: Sequence[Strategy]) -> List[str]:
    return list(dict.fromkeys(MODEL_FAMILY[s] for s in strategies))


def partition_run(
    config: ExperimentConfig, dataset: AreaDataset, seed: np.random.SeedSequence
) -> PartitionedRun:
    """Stratified split of the dataset and label-skewed client shards of its train part."""
    streams = run_streams(seed)
    train, test = split_train_test(dataset, config.dataset.test_fraction, streams["split"])
    spec = GroupSpec.from_config(config.partition, config.n_clients, config.n_labels)
    partition_rng = np.random.default_rng(streams["partition"])
    distributions = draw_client_distributions(spec, partition_rng)
    client_data = partition(train, distributions, spec, partition_rng)
    return PartitionedRun(train, test, spec, distributions, client_data)


def train_run(
    config: ExperimentConfig,
    dataset: AreaDataset,
    run_index: int,
    seed: np.random.SeedSequence,
    families: Optional[Sequence[str]] = None,
) -> RunArtifacts:
    """
    Split, partition, initialize and train the requested model families.

    Args:
        config: Experiment configuration
        dataset: Prepared area dataset with L = config.n_labels
        run_index: Index of the run (for logging and bookkeeping)
        seed: Run seed sequence
        families: Model families to train (GM, LM, FEDAVG, FEDAMP); default from strategies

    Returns:
        RunArtifacts
    """
    families = list(families) if families is not None else families_for(config.strategies)
    streams = run_streams(seed)
    split = partition_run(config, dataset, seed)
    train, test = split.train, split.test
    client_tests = (
        sample_client_test_sets(test, split.distributions, np.random.default_rng(streams["test"]))
        if test.size
        else []
    )

    architecture = (dataset.feature_dim, *config.model.hidden_layers, dataset.n_labels)
    initial = init_params(architecture, _as_int_seed(streams["init"]))
    federation = config.federation.model_copy(
        update={
            "training": config.federation.training.model_copy(
                update={"rng_seed": _as_int_seed(streams["train"])}
            )
        }
    )
    clients = [ClientState(i, initial, data.to_batch()) for i, data in enumerate(split.client_data)]

    models: Dict[str, List[MlpParams]] = {}
    histories: Dict[str, FederationHistory] = {}
    for family in families:
        if family == "GM":
            models[family] = [train_gm(initial, train.to_batch(), federation)]
        elif family == "LM":
            models[family] = train_lm(clients, federation)
        elif family == "FEDAVG":
            histories[family] = FederationHistory(FederationStrategy.FEDAVG.value)
            models[family] = [run_fedavg(clients, federation, histories[family])]
        elif family == "FEDAMP":
            histories[family] = FederationHistory(FederationStrategy.FEDAMP.value)
            models[family] = run_fedamp(clients, federation, histories[family])
        else:
            raise ContractViolationError(f"Unknown model family {family!r}")

    prior = (
        ClassPrior.from_counts(train.label_counts())
        if config.fusion.prior == "empirical"
        else ClassPrior.uniform(config.n_labels)
    )
    return RunArtifacts(
        run_index=run_index,
        train=train,
        test=test,
        distributions=split.distributions,
        client_data=split.client_data,
        client_tests=client_tests,
        prior=prior,
        models=models,
        histories=histories,
    )


def evaluate_run(config: ExperimentConfig, artifacts: RunArtifacts) -> Dict[str, float]:
    """Accuracy of every configured strategy on one run's test sets."""
    return {
        strategy.value: evaluate_strategy(
            strategy,
            artifacts.models[MODEL_FAMILY[strategy]],
            artifacts.test,
            artifacts.client_tests,
            artifacts.prior,
            config.fusion.floor,
        )
        for strategy in config.strategies
    }


def execute_run(
    config: ExperimentConfig,
    dataset: AreaDataset,
    run_index: int,
    seed: np.random.SeedSequence,
) -> RunOutcome:
    """Train and evaluate one run; library errors become a failed outcome."""
    try:
        with LogContext(logger, f"Monte-Carlo run {run_index}", log_level="DEBUG"):
            artifacts = train_run(config, dataset, run_index, seed)
            return RunOutcome(run_index, evaluate_run(config, artifacts))
    except FedLocError as e:
        logger.warning(f"Run {run_index} failed ({category_for(e)}): {e}")
        return RunOutcome(run_index, {}, error=f"{category_for(e)}: {e}")


def aggregate_outcomes(
    config: ExperimentConfig,
    outcomes: List[RunOutcome],
    sweep_axis: str = "none",
    sweep_value: Optional[float] = None,
) -> List[MetricsRecord]:
    n_failed = sum(outcome.failed for outcome in outcomes)
    return [
        MetricsRecord(
            strategy=strategy.value,
            sweep_axis=sweep_axis,
            sweep_value=sweep_value,
            accuracies=tuple(o.accuracies[strategy.value] for o in outcomes if not o.failed),
            n_failed=n_failed,
        )
        for strategy in config.strategies
    ]


def run_monte_carlo(
    config: ExperimentConfig,
    dataset: Optional[AreaDataset] = None,
    workers: int = 1,
    sweep_axis: str = "none",
    sweep_value: Optional[float] = None,
) -> MonteCarloResult:
    """
    R independent train/evaluate runs of every configured strategy.

    Args:
        config: Experiment configuration
        dataset: Prepared dataset; prepared from ``config.dataset`` when omitted
        workers: Worker processes (1 runs in-process)
        sweep_axis: Label stored on the records
        sweep_value: Value stored on the records

    Returns:
        MonteCarloResult with per-run outcomes and per-strategy records
    """
    if dataset is None:
        dataset = prepare_area_dataset(config.dataset, config.n_labels).dataset
    seeds = run_seeds(config.master_seed, config.monte_carlo_runs)

    if workers > 1 and len(seeds) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(seeds))) as pool:
            futures = [
                pool.submit(execute_run, config, dataset, r, seed) for r, seed in enumerate(seeds)
            ]
            outcomes = [future.result() for future in futures]
    else:
        outcomes = [execute_run(config, dataset, r, seed) for r, seed in enumerate(seeds)]

    result = MonteCarloResult(outcomes, aggregate_outcomes(config, outcomes, sweep_axis, sweep_value))
    if result.n_failed:
        logger.warning(f"{result.n_failed} of {len(outcomes)} runs failed")
    for record in result.records:
        logger.info(
            f"{record.strategy}: mean accuracy {record.mean:.4f} (std {record.std:.4f}, "
            f"{record.n_runs} runs)"
        )
    return result

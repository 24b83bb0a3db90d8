"""
Round orchestration for FedAvg and FedAMP, plus the GM and LM baselines.

Every local update of client i in round k (1-based) draws its shuffling stream
from ``local_rng(seed, i, k - 1)``. The baselines train once for
``rounds * epochs`` epochs on the stream of round index 0, so with K = 1 and
no proximal term every strategy sees the same local randomness.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, TypeVar

import numpy as np

from ..config.config_models import FederationConfig, FederationStrategy, TrainingConfig
from ..exceptions import DivergenceError, RoundDivergenceError
from ..models.mlp import LabeledBatch, MlpParams, objective, squared_distance, train_local
from .aggregation import ClientState, check_clients, fedavg_aggregate, fedavg_weights
from .history import FederationHistory, RoundRecord
from .similarity import amp_prox_centers, amp_similarity


logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


@dataclass(frozen=True, eq=False)
class FederationResult:
    """Final models (one global model for FedAvg, M personalized ones for FedAMP)."""

    strategy: FederationStrategy
    models: List[MlpParams]
    history: FederationHistory


def local_rng(seed: int, client_id: int, round_index: int) -> np.random.Generator:
    """Independent shuffling stream of one (client, round) pair."""
    return np.random.default_rng(
        np.random.SeedSequence(seed, spawn_key=(client_id, round_index))
    )


def _map_clients(fn: Callable[[T], R], items: Sequence[T], workers: int) -> List[R]:
    # results come back in input order; the first failure in that order is raised
    if workers > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=min(workers, len(items))) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


def _train_client(
    client: ClientState,
    start: MlpParams,
    training: TrainingConfig,
    round_index: int,
    prox_center: Optional[MlpParams] = None,
    prox_weight: float = 0.0,
) -> MlpParams:
    try:
        return train_local(
            start,
            client.data,
            training,
            prox_center=prox_center,
            prox_weight=prox_weight,
            rng=local_rng(training.rng_seed, client.client_id, round_index - 1),
        )
    except DivergenceError as e:
        raise RoundDivergenceError(
            f"Client {client.client_id} diverged in round {round_index}, epoch {e.epoch}: {e}",
            client_id=client.client_id,
            round_index=round_index,
            epoch=e.epoch,
        ) from e


def run_fedamp(
    clients: List[ClientState],
    config: FederationConfig,
    history: Optional[FederationHistory] = None,
) -> List[MlpParams]:
    """
    Personalized training by attentive message passing.

    Each round the server computes the similarity matrix and prox-centers
    U^k from W^{k-1}; client i then continues from w_i^{k-1} on its own data
    with the proximal term lambda_tilde * ||w - u_i^k||^2.

    Args:
        clients: Client states holding identical initial parameters
        config: Federation settings
        history: Optional sink for per-round diagnostics

    Returns:
        Personalized models in client-id order

    Raises:
        RoundDivergenceError: A client's local training diverged
    """
    ordered = check_clients(clients)
    models = [c.params for c in ordered]
    for k in range(1, config.rounds + 1):
        similarity = amp_similarity(models, config.sigma, config.alpha, config.kernel)
        centers = amp_prox_centers(models, similarity)

        def update(i: int) -> MlpParams:
            return _train_client(
                ordered[i],
                models[i],
                config.training,
                k,
                prox_center=centers[i],
                prox_weight=config.lambda_tilde,
            )

        models = _map_clients(update, list(range(len(ordered))), config.workers)

        if history is not None:
            for i, client in enumerate(ordered):
                history.append(
                    RoundRecord(
                        round_index=k,
                        client_id=client.client_id,
                        local_loss=objective(models[i], client.data),
                        prox_distance=float(np.sqrt(squared_distance(models[i], centers[i]))),
                        xi_row=tuple(float(x) for x in similarity.xi[i]),
                    )
                )
        logger.debug(f"FedAMP round {k}/{config.rounds} done (alpha used {similarity.alpha:.6g})")
    return models


def run_fedavg(
    clients: List[ClientState],
    config: FederationConfig,
    history: Optional[FederationHistory] = None,
) -> MlpParams:
    """
    Federated averaging: clients train from the broadcast global model, the
    server replaces it with the sample-weighted mean.

    The starting global model is the first client's parameters.
    """
    ordered = check_clients(clients)
    weights = tuple(float(w) for w in fedavg_weights(ordered))
    global_params = ordered[0].params
    for k in range(1, config.rounds + 1):
        start = global_params

        def update(client: ClientState) -> ClientState:
            return client.with_params(_train_client(client, start, config.training, k))

        trained = _map_clients(update, ordered, config.workers)
        global_params = fedavg_aggregate(trained)

        if history is not None:
            for client in trained:
                history.append(
                    RoundRecord(
                        round_index=k,
                        client_id=client.client_id,
                        local_loss=objective(client.params, client.data),
                        prox_distance=float(np.sqrt(squared_distance(client.params, start))),
                        xi_row=weights,
                    )
                )
        logger.debug(f"FedAvg round {k}/{config.rounds} done")
    return global_params


def run_federation(clients: List[ClientState], config: FederationConfig) -> FederationResult:
    """Run the configured federated strategy and keep its round history."""
    history = FederationHistory(strategy=config.strategy.value)
    if config.strategy == FederationStrategy.FEDAVG:
        models = [run_fedavg(clients, config, history)]
    else:
        models = run_fedamp(clients, config, history)
    return FederationResult(strategy=config.strategy, models=models, history=history)


def baseline_training(config: FederationConfig) -> TrainingConfig:
    """Training settings giving a baseline as many local epochs as a federated run."""
    return config.training.model_copy(update={"epochs": config.rounds * config.training.epochs})


def train_lm(clients: List[ClientState], config: FederationConfig) -> List[MlpParams]:
    """Independent local models, no communication."""
    ordered = check_clients(clients)
    training = baseline_training(config)
    return _map_clients(
        lambda client: _train_client(client, client.params, training, 1),
        ordered,
        config.workers,
    )


def train_gm(params: MlpParams, data: LabeledBatch, config: FederationConfig) -> MlpParams:
    """One global model on the pooled training data (trained as client 0)."""
    return train_lm([ClientState(0, params, data)], config)[0]

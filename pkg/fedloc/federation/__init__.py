"""
Server-side orchestration: FedAvg, FedAMP and the GM / LM baselines.
"""

from .aggregation import ClientState, check_clients, fedavg_aggregate, fedavg_weights
from .history import FederationHistory, RoundRecord
from .server import (
    FederationResult,
    baseline_training,
    local_rng,
    run_fedamp,
    run_fedavg,
    run_federation,
    train_gm,
    train_lm,
)
from .similarity import (
    AttentionKernel,
    SimilarityMatrix,
    amp_prox_centers,
    amp_similarity,
    get_kernel,
    pairwise_squared_distances,
    register_kernel,
)

__all__ = [
    "AttentionKernel",
    "ClientState",
    "FederationHistory",
    "FederationResult",
    "RoundRecord",
    "SimilarityMatrix",
    "amp_prox_centers",
    "amp_similarity",
    "baseline_training",
    "check_clients",
    "fedavg_aggregate",
    "fedavg_weights",
    "get_kernel",
    "local_rng",
    "pairwise_squared_distances",
    "register_kernel",
    "run_fedamp",
    "run_fedavg",
    "run_federation",
    "train_gm",
    "train_lm",
]

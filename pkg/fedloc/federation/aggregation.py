"""
Client state and FedAvg aggregation.
"""

from dataclasses import dataclass
from typing import List

import numpy as np

from ..exceptions import ContractViolationError
from ..models.mlp import LabeledBatch, MlpParams, flatten, unflatten


@dataclass(frozen=True, eq=False)
class ClientState:
    """One silo: its id, current model w_i and local data."""

    client_id: int
    params: MlpParams
    data: LabeledBatch

    @property
    def sample_count(self) -> int:
        """N_i."""
        return self.data.size

    def with_params(self, params: MlpParams) -> "ClientState":
        return ClientState(self.client_id, params, self.data)


def check_clients(clients: List[ClientState]) -> List[ClientState]:
    """Clients sorted by id, after checking ids are unique and architectures equal."""
    if not clients:
        raise ContractViolationError("Need at least one client")
    ordered = sorted(clients, key=lambda c: c.client_id)
    ids = [c.client_id for c in ordered]
    if len(set(ids)) != len(ids):
        raise ContractViolationError(f"Duplicate client ids: {ids}")
    architecture = ordered[0].params.architecture
    for client in ordered:
        if client.params.architecture != architecture:
            raise ContractViolationError(
                f"Client {client.client_id} has architecture {client.params.architecture}, "
                f"expected {architecture}"
            )
    return ordered


def fedavg_weights(clients: List[ClientState]) -> np.ndarray:
    """N_i / N in client-id order."""
    counts = np.asarray([c.sample_count for c in check_clients(clients)], dtype=np.float64)
    return counts / counts.sum()


def fedavg_aggregate(clients: List[ClientState]) -> MlpParams:
    """
    Sample-count weighted mean sum_i (N_i / N) w_i.

    Terms are accumulated in ascending client-id order, so the result does not
    depend on the order of ``clients``.
    """
    ordered = check_clients(clients)
    total = sum(c.sample_count for c in ordered)
    aggregate = np.zeros(ordered[0].params.size)
    for client in ordered:
        aggregate += (client.sample_count / total) * flatten(client.params)
    return unflatten(aggregate, ordered[0].params.architecture)

"""
Label-skewed client datasets drawn without replacement from shared label pools.
"""

import logging
from typing import List

import numpy as np

from ..data.preprocessing import AreaDataset
from ..exceptions import CapacityError, ContractViolationError, ParameterError
from .dirichlet import ClientLabelDistribution, GroupSpec


logger = logging.getLogger(__name__)


def largest_remainder(probs: np.ndarray, total: int) -> np.ndarray:
    """
    Integer counts summing to ``total`` closest to ``probs * total``.

    Leftover units go to the largest fractional parts, lowest index first on ties.
    """
    probs = np.asarray(probs, dtype=np.float64)
    exact = probs * total
    counts = np.floor(exact).astype(np.int64)
    leftover = int(total - counts.sum())
    if leftover > 0:
        order = np.argsort(-(exact - counts), kind="stable")
        counts[order[:leftover]] += 1
    return counts


def target_counts(distribution: ClientLabelDistribution, n_samples: int) -> np.ndarray:
    """Per-label sample targets of one client."""
    return largest_remainder(distribution.probs, n_samples)


def client_sample_count(spec: GroupSpec, n_train: int, n_clients: int) -> int:
    return spec.samples_per_client if spec.samples_per_client is not None else n_train // n_clients


def partition(
    dataset: AreaDataset,
    distributions: List[ClientLabelDistribution],
    spec: GroupSpec,
    rng: np.random.Generator,
) -> List[AreaDataset]:
    """
    Split a training set into M disjoint, non-empty client datasets.

    Clients are served in id order. When a label pool runs dry the missing
    samples are redistributed over the labels that still have supply, in
    proportion to the client's own distribution.

    Args:
        dataset: Training set
        distributions: One target label distribution per client
        spec: Group spec (samples per client)
        rng: Stream used to shuffle the label pools

    Returns:
        One AreaDataset per client

    Raises:
        CapacityError: Total demand exceeds the training set
    """
    n_clients = len(distributions)
    if n_clients < 1:
        raise ParameterError("Need at least one client distribution")
    if any(d.probs.size != dataset.n_labels for d in distributions):
        raise ContractViolationError(f"Distributions must cover L = {dataset.n_labels} labels")

    per_client = client_sample_count(spec, dataset.size, n_clients)
    if per_client < 1:
        raise CapacityError(f"{dataset.size} training samples cannot feed {n_clients} clients")
    if per_client * n_clients > dataset.size:
        raise CapacityError(
            f"Demand {per_client} x {n_clients} exceeds the {dataset.size} training samples"
        )

    pools = [rng.permutation(np.flatnonzero(dataset.labels == j)) for j in range(dataset.n_labels)]
    cursor = np.zeros(dataset.n_labels, dtype=np.int64)
    supply = np.asarray([pool.size for pool in pools], dtype=np.int64)

    clients = []
    for client_id, distribution in enumerate(distributions):
        wanted = target_counts(distribution, per_client)
        granted = np.minimum(wanted, supply - cursor)
        deficit = per_client - int(granted.sum())
        if deficit:
            logger.warning(
                f"Client {client_id}: label pools short by {deficit} samples, redistributing"
            )
        while deficit > 0:
            remaining = supply - cursor - granted
            open_labels = np.flatnonzero(remaining > 0)
            if open_labels.size == 0:
                raise CapacityError(f"Client {client_id}: no supply left for {deficit} samples")
            weights = distribution.probs[open_labels]
            weights = weights / weights.sum() if weights.sum() > 0 else np.full(open_labels.size, 1.0 / open_labels.size)
            extra = np.minimum(largest_remainder(weights, deficit), remaining[open_labels])
            if extra.sum() == 0:
                # fractional shares all rounded onto exhausted labels; take one from the largest pool
                extra[int(np.argmax(remaining[open_labels]))] = 1
            granted[open_labels] += extra
            deficit = per_client - int(granted.sum())

        positions = []
        for label in range(dataset.n_labels):
            take = int(granted[label])
            positions.append(pools[label][cursor[label]: cursor[label] + take])
            cursor[label] += take
        clients.append(dataset.subset(np.sort(np.concatenate(positions))))

    logger.info(
        f"Partitioned {int(cursor.sum())} of {dataset.size} samples over {n_clients} clients"
    )
    return clients

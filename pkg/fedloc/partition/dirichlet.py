"""
Group-structured Dirichlet label distributions.

Clients are arranged in groups; every client of a group draws its label
proportions from Dir(beta) where beta is ``beta_high`` on the group's dominant
labels and ``beta_low`` elsewhere, so clients of a group end up with similar
(but not equal) label mixes.
"""

import logging
from dataclasses import dataclass
from typing import FrozenSet, List, Optional, Tuple

import numpy as np

from ..config.config_models import PartitionConfig
from ..exceptions import ContractViolationError, InvalidInputError, ParameterError
from ..models.posterior import SUM_TOLERANCE


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ClientGroup:
    client_count: int
    dominant_labels: FrozenSet[int]


@dataclass(frozen=True)
class GroupSpec:
    """Client groups with their dominant labels and the two concentration levels.

    ``samples_per_client`` of None means floor(N_train / M) per client.
    """

    groups: Tuple[ClientGroup, ...]
    n_labels: int
    beta_high: float = 80.0
    beta_low: float = 20.0
    samples_per_client: Optional[int] = None

    def __post_init__(self):
        if not self.groups:
            raise ParameterError("A group spec needs at least one group")
        for g, group in enumerate(self.groups):
            if group.client_count < 1:
                raise ParameterError(f"Group {g} has no clients")
            bad = [j for j in group.dominant_labels if not 0 <= j < self.n_labels]
            if bad:
                raise ParameterError(f"Group {g} names labels outside [0, {self.n_labels}): {bad}")
        if not self.beta_high > self.beta_low > 0:
            raise ParameterError(
                f"Need beta_high > beta_low > 0, got {self.beta_high} and {self.beta_low}"
            )
        if self.samples_per_client is not None and self.samples_per_client < 1:
            raise ParameterError("samples_per_client must be >= 1")

    @property
    def n_clients(self) -> int:
        return sum(group.client_count for group in self.groups)

    def client_groups(self) -> List[int]:
        """Group index of every client, in client-id order."""
        return [g for g, group in enumerate(self.groups) for _ in range(group.client_count)]

    @classmethod
    def auto(
        cls,
        n_clients: int,
        n_labels: int,
        n_groups: int = 3,
        labels_per_group: int = 3,
        beta_high: float = 80.0,
        beta_low: float = 20.0,
        samples_per_client: Optional[int] = None,
    ) -> "GroupSpec":
        """
        Contiguous groups of near-equal size; remainder clients join the last groups.

        Group g dominates labels (g*k + t) mod L for t < k, k = labels_per_group.
        """
        if n_clients < 1:
            raise ParameterError("Need at least one client")
        n_groups = min(n_groups, n_clients)
        base, remainder = divmod(n_clients, n_groups)
        k = min(labels_per_group, n_labels)
        groups = tuple(
            ClientGroup(
                client_count=base + (1 if g >= n_groups - remainder else 0),
                dominant_labels=frozenset((g * k + t) % n_labels for t in range(k)),
            )
            for g in range(n_groups)
        )
        return cls(groups, n_labels, beta_high, beta_low, samples_per_client)

    @classmethod
    def from_config(cls, config: PartitionConfig, n_clients: int, n_labels: int) -> "GroupSpec":
        """Explicit groups when they fit (M clients, labels < L), auto layout otherwise."""
        per_client = None if config.samples_per_client == "proportional" else config.samples_per_client
        if config.groups:
            fits = sum(g.clients for g in config.groups) == n_clients and all(
                0 <= j < n_labels for g in config.groups for j in g.dominant_labels
            )
            if fits:
                return cls(
                    tuple(ClientGroup(g.clients, frozenset(g.dominant_labels)) for g in config.groups),
                    n_labels,
                    config.beta_high,
                    config.beta_low,
                    per_client,
                )
            logger.warning(
                f"Configured groups do not fit M={n_clients}, L={n_labels}; using the automatic layout"
            )
        return cls.auto(
            n_clients,
            n_labels,
            config.n_groups,
            config.labels_per_group,
            config.beta_high,
            config.beta_low,
            per_client,
        )


@dataclass(frozen=True, eq=False)
class ClientLabelDistribution:
    """Target label proportions of one client."""

    probs: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=np.float64)
        if probs.ndim != 1 or probs.size < 1:
            raise ContractViolationError("Label distribution must be a non-empty vector")
        if np.any(probs < 0) or abs(float(probs.sum()) - 1.0) > SUM_TOLERANCE:
            raise InvalidInputError("Label distribution must be non-negative and sum to 1")
        object.__setattr__(self, "probs", probs)


def concentration_vector(spec: GroupSpec, group_index: int) -> np.ndarray:
    """beta_high at the group's dominant labels, beta_low elsewhere."""
    if not 0 <= group_index < len(spec.groups):
        raise ParameterError(f"No group {group_index} (spec has {len(spec.groups)})")
    beta = np.full(spec.n_labels, spec.beta_low, dtype=np.float64)
    dominant = sorted(spec.groups[group_index].dominant_labels)
    beta[dominant] = spec.beta_high
    return beta


def sample_distribution(beta: np.ndarray, rng: np.random.Generator) -> ClientLabelDistribution:
    """
    One Dirichlet(beta) draw as normalized independent Gamma(beta_j, 1) variates.

    NumPy's gamma sampler is Marsaglia-Tsang with the shape-boost for beta_j < 1.
    """
    beta = np.asarray(beta, dtype=np.float64)
    if beta.ndim != 1 or beta.size < 1:
        raise ParameterError("beta must be a non-empty vector")
    if np.any(~np.isfinite(beta)) or np.any(beta <= 0):
        raise ParameterError(f"Every concentration must be > 0, got {beta.tolist()}")
    variates = rng.standard_gamma(beta)
    total = variates.sum()
    if total <= 0:
        # every variate underflowed: the draw is a point mass on the largest shape
        variates = (beta == beta.max()).astype(np.float64)
        total = variates.sum()
    probs = variates / total
    return ClientLabelDistribution(probs / probs.sum())


def draw_client_distributions(
    spec: GroupSpec, rng: np.random.Generator
) -> List[ClientLabelDistribution]:
    """One draw per client, in client-id order."""
    return [
        sample_distribution(concentration_vector(spec, g), rng) for g in spec.client_groups()
    ]

"""
FedAMP attentive message passing: similarity coefficients and prox-centers.

For clients i != j the coefficient is xi_ij = alpha * h'(||w_i - w_j||^2) where
h is the attention-inducing kernel; the diagonal takes the rest of the row so
every row is a convex combination.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List

import numpy as np
from scipy.spatial.distance import pdist, squareform

from ..exceptions import ContractViolationError, InvalidStateError, ParameterError
from ..models.mlp import MlpParams, flatten, unflatten


logger = logging.getLogger(__name__)

ROW_TOLERANCE = 1e-12


@dataclass(frozen=True)
class AttentionKernel:
    """Kernel h(v) on squared distances and its derivative h'(v)."""

    name: str
    value: Callable[[np.ndarray, float], np.ndarray]
    derivative: Callable[[np.ndarray, float], np.ndarray]


_KERNELS: Dict[str, AttentionKernel] = {}


def register_kernel(kernel: AttentionKernel) -> None:
    _KERNELS[kernel.name] = kernel


def get_kernel(name: str) -> AttentionKernel:
    try:
        return _KERNELS[name]
    except KeyError:
        raise ParameterError(
            f"Unknown attention kernel '{name}', available: {sorted(_KERNELS)}"
        ) from None


# h(v) = 1 - exp(-v / sigma)
register_kernel(
    AttentionKernel(
        name="gaussian-saturating",
        value=lambda v, sigma: -np.expm1(-v / sigma),
        derivative=lambda v, sigma: np.exp(-v / sigma) / sigma,
    )
)


@dataclass(frozen=True, eq=False)
class SimilarityMatrix:
    """Row-stochastic M x M coefficients; ``alpha`` is the step size actually used."""

    xi: np.ndarray
    alpha: float
    clamped: bool = False

    def __post_init__(self):
        xi = np.asarray(self.xi, dtype=np.float64)
        if xi.ndim != 2 or xi.shape[0] != xi.shape[1] or xi.shape[0] < 1:
            raise ContractViolationError(f"Similarity matrix must be square, got {xi.shape}")
        if np.any(xi < 0.0):
            raise InvalidStateError("Similarity coefficients must be >= 0")
        if np.max(np.abs(xi.sum(axis=1) - 1.0)) > ROW_TOLERANCE:
            raise InvalidStateError("Similarity rows must sum to 1")
        xi.setflags(write=False)
        object.__setattr__(self, "xi", xi)

    @property
    def n_clients(self) -> int:
        return int(self.xi.shape[0])


def pairwise_squared_distances(params_list: List[MlpParams]) -> np.ndarray:
    """Symmetric matrix of ||w_i - w_j||^2 over flattened parameters."""
    if not params_list:
        raise ContractViolationError("Need at least one model")
    architecture = params_list[0].architecture
    if any(p.architecture != architecture for p in params_list):
        raise ContractViolationError("All client models must share one architecture")
    if len(params_list) == 1:
        return np.zeros((1, 1))
    vectors = np.vstack([flatten(p) for p in params_list])
    return squareform(pdist(vectors, metric="sqeuclidean"))


def amp_similarity(
    params_list: List[MlpParams],
    sigma: float,
    alpha: float,
    kernel: str = "gaussian-saturating",
) -> SimilarityMatrix:
    """
    Similarity coefficients of one FedAMP round.

    When alpha would push a diagonal entry below zero it is lowered to the
    largest value keeping every diagonal >= 0, and a warning is logged.

    Args:
        params_list: Client models w^{k-1}, in client-id order
        sigma: Kernel scale (> 0)
        alpha: Prox-center step size (> 0)
        kernel: Registered attention kernel name

    Returns:
        SimilarityMatrix

    Raises:
        InvalidStateError: A pairwise distance is not finite
    """
    if sigma <= 0 or alpha <= 0:
        raise ParameterError(f"sigma and alpha must be > 0, got {sigma} and {alpha}")
    distances = pairwise_squared_distances(params_list)
    if not np.all(np.isfinite(distances)):
        raise InvalidStateError("Non-finite distance between client models")

    attention = get_kernel(kernel).derivative(distances, sigma)
    np.fill_diagonal(attention, 0.0)
    heaviest_row = float(attention.sum(axis=1).max())

    used_alpha = alpha
    clamped = False
    if heaviest_row > 0.0 and alpha * heaviest_row > 1.0:
        used_alpha = 1.0 / heaviest_row
        clamped = True
        logger.warning(f"alpha {alpha} makes a similarity diagonal negative, clamped to {used_alpha:.6g}")

    xi = used_alpha * attention
    np.fill_diagonal(xi, np.maximum(1.0 - xi.sum(axis=1), 0.0))
    return SimilarityMatrix(xi=xi, alpha=used_alpha, clamped=clamped)


def amp_prox_centers(params_list: List[MlpParams], similarity: SimilarityMatrix) -> List[MlpParams]:
    """
    u_i = sum_j xi_ij w_j, evaluated as w_i + sum_j xi_ij (w_j - w_i).

    The difference form returns w_i exactly when all models coincide.
    """
    if similarity.n_clients != len(params_list):
        raise ContractViolationError(
            f"{len(params_list)} models for a {similarity.n_clients}-client similarity matrix"
        )
    pairwise_squared_distances(params_list)  # architecture check
    architecture = params_list[0].architecture
    vectors = np.vstack([flatten(p) for p in params_list])
    return [
        unflatten(vectors[i] + similarity.xi[i] @ (vectors - vectors[i]), architecture)
        for i in range(len(params_list))
    ]

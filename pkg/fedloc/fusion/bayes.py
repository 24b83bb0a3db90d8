"""
Bayesian fusion of conditionally independent classifiers.

For M models with posteriors p_{j|i} and class prior p_{j|0}, the joint
posterior is proportional to prod_i p_{j|i} / p_{j|0}^(M-1). Scores are
accumulated in log space with every p_{j|i} floored at ``floor`` first.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import softmax

from ..exceptions import ContractViolationError, DegenerateFusionError, InvalidInputError
from ..models.mlp import MlpParams, forward, predict_proba
from ..models.posterior import SUM_TOLERANCE, CategoricalPosterior


logger = logging.getLogger(__name__)

DEFAULT_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class ClassPrior:
    """Strictly positive prior p_{j|0} over the L labels."""

    probs: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=np.float64)
        if probs.ndim != 1 or probs.size < 1:
            raise ContractViolationError(f"Prior must be a non-empty vector, got shape {probs.shape}")
        if not np.all(np.isfinite(probs)) or np.any(probs <= 0.0):
            raise InvalidInputError("Every prior probability must be finite and > 0")
        if abs(float(probs.sum()) - 1.0) > SUM_TOLERANCE:
            raise InvalidInputError(f"Prior must sum to 1, got {probs.sum()!r}")
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)

    @property
    def n_labels(self) -> int:
        return int(self.probs.size)

    @classmethod
    def uniform(cls, n_labels: int) -> "ClassPrior":
        return cls(np.full(n_labels, 1.0 / n_labels))

    @classmethod
    def from_counts(cls, counts: Sequence[int], smoothing: float = 1.0) -> "ClassPrior":
        """Label frequencies with ``smoothing`` pseudo-counts per label."""
        counts = np.asarray(counts, dtype=np.float64) + smoothing
        return cls(counts / counts.sum())


def fuse_batch(
    posteriors: np.ndarray,
    prior: ClassPrior,
    floor: float = DEFAULT_FLOOR,
    fallback: bool = False,
) -> np.ndarray:
    """
    Fuse M posteriors for each of n samples.

    Args:
        posteriors: Array [M, n, L]
        prior: Class prior over L labels
        floor: Lower bound applied to every p_{j|i} before the log (0 disables)
        fallback: Replace degenerate rows by the mean posterior instead of raising

    Returns:
        Fused posteriors [n, L]

    Raises:
        DegenerateFusionError: Some sample has every label ruled out (fallback off)
    """
    posteriors = np.asarray(posteriors, dtype=np.float64)
    if posteriors.ndim != 3 or posteriors.shape[0] < 1:
        raise ContractViolationError(f"Expected posteriors[M, n, L], got {posteriors.shape}")
    n_models, _, n_labels = posteriors.shape
    if n_labels != prior.n_labels:
        raise ContractViolationError(f"Posteriors have L = {n_labels}, prior has {prior.n_labels}")
    if n_models == 1:
        return posteriors[0].copy()

    with np.errstate(divide="ignore"):
        log_terms = np.log(np.maximum(posteriors, floor))
    scores = log_terms.sum(axis=0) - (n_models - 1) * np.log(prior.probs)

    degenerate = np.all(np.isneginf(scores), axis=1)
    if np.any(degenerate):
        if not fallback:
            raise DegenerateFusionError(
                f"{int(degenerate.sum())} sample(s) have every label ruled out by some model"
            )
        logger.warning(f"Degenerate fusion on {int(degenerate.sum())} sample(s), using the mean posterior")
        scores[degenerate] = 0.0

    fused = softmax(scores, axis=1)
    if np.any(degenerate):
        fused[degenerate] = posteriors[:, degenerate, :].mean(axis=0)
    return fused


def fuse(
    posteriors: List[CategoricalPosterior],
    prior: ClassPrior,
    floor: float = DEFAULT_FLOOR,
) -> CategoricalPosterior:
    """Single-sample form of :func:`fuse_batch`; M = 1 returns the input unchanged."""
    if not posteriors:
        raise ContractViolationError("Need at least one posterior")
    if any(p.n_labels != prior.n_labels for p in posteriors):
        raise ContractViolationError("Every posterior must cover the prior's labels")
    if len(posteriors) == 1:
        return posteriors[0]
    stacked = np.stack([p.probs for p in posteriors])[:, np.newaxis, :]
    fused = fuse_batch(stacked, prior, floor)[0]
    return CategoricalPosterior(fused / fused.sum())


def classify_map(posterior: CategoricalPosterior) -> int:
    """Most probable label; the lowest index wins ties."""
    return int(np.argmax(posterior.probs))


def predict_fused(
    models: List[MlpParams],
    features: np.ndarray,
    prior: Optional[ClassPrior] = None,
    floor: float = DEFAULT_FLOOR,
) -> Tuple[CategoricalPosterior, int]:
    """
    Fused posterior and MAP label of one feature vector.

    A degenerate fusion falls back to the mean of the model posteriors.
    """
    if not models:
        raise ContractViolationError("Need at least one model")
    posteriors = [forward(model, features) for model in models]
    prior = prior or ClassPrior.uniform(posteriors[0].n_labels)
    try:
        fused = fuse(posteriors, prior, floor)
    except DegenerateFusionError as e:
        logger.warning(f"{e}; averaging the model posteriors instead")
        mean = np.mean([p.probs for p in posteriors], axis=0)
        fused = CategoricalPosterior(mean / mean.sum())
    return fused, classify_map(fused)


def predict_fused_batch(
    models: List[MlpParams],
    features: np.ndarray,
    prior: Optional[ClassPrior] = None,
    floor: float = DEFAULT_FLOOR,
) -> Tuple[np.ndarray, np.ndarray]:
    """Batched :func:`predict_fused`: (fused posteriors [n, L], labels [n])."""
    if not models:
        raise ContractViolationError("Need at least one model")
    posteriors = np.stack([predict_proba(model, features) for model in models])
    prior = prior or ClassPrior.uniform(posteriors.shape[2])
    fused = fuse_batch(posteriors, prior, floor, fallback=True)
    return fused, np.argmax(fused, axis=1)

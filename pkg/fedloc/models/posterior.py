"""Categorical posterior over area labels."""

from dataclasses import dataclass

import numpy as np

from ..exceptions import ContractViolationError, InvalidInputError

SUM_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class CategoricalPosterior:
    """Probability vector p_{j|i} over L labels."""

    probs: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=np.float64)
        if probs.ndim != 1 or probs.size < 1:
            raise ContractViolationError(
                f"Posterior must be a non-empty vector, got shape {probs.shape}"
            )
        if not np.all(np.isfinite(probs)) or np.any(probs < 0.0):
            raise InvalidInputError("Posterior entries must be finite and >= 0")
        if abs(float(probs.sum()) - 1.0) > SUM_TOLERANCE:
            raise InvalidInputError(
                f"Posterior must sum to 1 within {SUM_TOLERANCE}, got {probs.sum()!r}"
            )
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)

    @property
    def n_labels(self) -> int:
        return int(self.probs.size)

    @classmethod
    def uniform(cls, n_labels: int) -> "CategoricalPosterior":
        return cls(np.full(n_labels, 1.0 / n_labels))

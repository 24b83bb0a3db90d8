"""
Accuracy of each strategy and the per-client test sets it is measured on.
"""

import logging
from typing import List, Optional, Sequence

import numpy as np

from ..config.config_models import Strategy
from ..data.preprocessing import AreaDataset
from ..exceptions import ContractViolationError, EvaluationError
from ..fusion.bayes import DEFAULT_FLOOR, ClassPrior, predict_fused_batch
from ..models.mlp import MlpParams, accuracy
from ..partition.dirichlet import ClientLabelDistribution
from ..partition.partitioner import largest_remainder


logger = logging.getLogger(__name__)

SINGLE_MODEL = {Strategy.GM, Strategy.FEDAVG}
FUSED = {Strategy.LM_F, Strategy.FEDAMP_F}
PER_CLIENT = {Strategy.LM, Strategy.FEDAMP}


def sample_client_test_sets(
    test: AreaDataset,
    distributions: List[ClientLabelDistribution],
    rng: np.random.Generator,
    size: Optional[int] = None,
) -> List[AreaDataset]:
    """
    Resample the global test set to follow each client's label distribution.

    Client i gets ``size`` samples (default: the test-set size), split across
    labels by largest-remainder rounding of its distribution restricted to the
    labels present in ``test``; each label is drawn with replacement from that
    label's test samples.
    """
    if test.size == 0:
        raise EvaluationError("Cannot resample an empty test set")
    size = test.size if size is None else size
    present = test.label_counts() > 0
    pools = [np.flatnonzero(test.labels == j) for j in range(test.n_labels)]

    client_tests = []
    for distribution in distributions:
        probs = np.where(present, distribution.probs, 0.0)
        probs = probs / probs.sum() if probs.sum() > 0 else present / present.sum()
        counts = largest_remainder(probs, size)
        positions = np.concatenate(
            [rng.choice(pools[j], size=int(counts[j]), replace=True) for j in range(test.n_labels) if counts[j]]
        )
        client_tests.append(test.subset(positions))
    return client_tests


def _check_nonempty(data: AreaDataset, what: str) -> None:
    if data.size == 0:
        raise EvaluationError(f"{what} is empty")


def evaluate_strategy(
    strategy: Strategy,
    models: Sequence[MlpParams],
    test_global: AreaDataset,
    test_per_client: Optional[Sequence[AreaDataset]] = None,
    prior: Optional[ClassPrior] = None,
    floor: float = DEFAULT_FLOOR,
) -> float:
    """
    Test accuracy of one strategy.

    Args:
        strategy: Strategy whose models are scored
        models: One model for GM/FEDAVG, one per client otherwise
        test_global: Held-out test set
        test_per_client: Client test sets (LM and FEDAMP only)
        prior: Fusion prior (LM-F and FEDAMP-F only), uniform by default
        floor: Fusion probability floor

    Returns:
        Accuracy in [0, 1]; for LM and FEDAMP the mean over clients

    Raises:
        EvaluationError: A test set is empty
    """
    if not models:
        raise ContractViolationError(f"{strategy.value}: no models to evaluate")

    if strategy in PER_CLIENT:
        if not test_per_client:
            raise EvaluationError(f"{strategy.value}: no per-client test sets")
        if len(test_per_client) != len(models):
            raise ContractViolationError(
                f"{strategy.value} needs one test set per model ({len(models)})"
            )
        scores = []
        for i, (model, data) in enumerate(zip(models, test_per_client)):
            _check_nonempty(data, f"Test set of client {i}")
            scores.append(accuracy(model, data.to_batch()))
        return float(np.mean(scores))

    _check_nonempty(test_global, "Global test set")
    if strategy in SINGLE_MODEL:
        if len(models) != 1:
            raise ContractViolationError(f"{strategy.value} is scored on a single model")
        return accuracy(models[0], test_global.to_batch())

    _, predictions = predict_fused_batch(list(models), test_global.features, prior, floor)
    return float(np.mean(predictions == test_global.labels))

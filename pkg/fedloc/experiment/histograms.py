"""
Plot data for the distribution of p(target | x) before and after fusion.
"""

from dataclasses import dataclass
from typing import List, Optional

import numpy as np
import pandas as pd

from ..data.preprocessing import AreaDataset
from ..exceptions import EmptySelectionError, ParameterError
from ..fusion.bayes import DEFAULT_FLOOR, ClassPrior, fuse_batch
from ..models.mlp import MlpParams, predict_proba

FUSED_SOURCE = "fused"


@dataclass(frozen=True, eq=False)
class PosteriorHistograms:
    values: pd.DataFrame
    histogram: pd.DataFrame


def emit_posterior_histograms(
    models: List[MlpParams],
    test: AreaDataset,
    target_label: int,
    prior: Optional[ClassPrior] = None,
    bins: int = 20,
    floor: float = DEFAULT_FLOOR,
) -> PosteriorHistograms:
    """
    Per-model p(target | x) and fused p(target | all) on the test samples of one label.

    Args:
        models: Client models
        test: Test set
        target_label: Label whose samples are scored
        prior: Fusion prior, uniform by default
        bins: Equal-width bins on [0, 1]
        floor: Fusion probability floor

    Returns:
        Long-format values (source, sample_index, probability) and binned counts

    Raises:
        EmptySelectionError: The test set holds no sample of ``target_label``
    """
    if not 0 <= target_label < test.n_labels:
        raise ParameterError(f"Target label {target_label} outside [0, {test.n_labels})")
    selected = np.flatnonzero(test.labels == target_label)
    if selected.size == 0:
        raise EmptySelectionError(f"No test samples with label {target_label}")

    features = test.features[selected]
    posteriors = np.stack([predict_proba(model, features) for model in models])
    prior = prior or ClassPrior.uniform(test.n_labels)
    fused = fuse_batch(posteriors, prior, floor, fallback=True)

    sources = [f"model_{i}" for i in range(len(models))] + [FUSED_SOURCE]
    columns = [posteriors[i, :, target_label] for i in range(len(models))] + [fused[:, target_label]]

    values = pd.concat(
        [
            pd.DataFrame(
                {"source": source, "sample_index": test.index[selected], "probability": column}
            )
            for source, column in zip(sources, columns)
        ],
        ignore_index=True,
    )

    edges = np.linspace(0.0, 1.0, bins + 1)
    histogram = pd.concat(
        [
            pd.DataFrame(
                {
                    "source": source,
                    "bin_left": edges[:-1],
                    "bin_right": edges[1:],
                    "count": np.histogram(column, bins=edges)[0],
                }
            )
            for source, column in zip(sources, columns)
        ],
        ignore_index=True,
    )
    return PosteriorHistograms(values=values, histogram=histogram)

"""
Dense MLP classifier: forward pass, gradients, local training, checkpoints.
"""

from .checkpoint import Checkpoint, checkpoint_digest, load_checkpoint, save_checkpoint
from .mlp import (
    LabeledBatch,
    MlpParams,
    accuracy,
    flatten,
    forward,
    init_params,
    loss_and_gradient,
    objective,
    parameter_count,
    predict_proba,
    squared_distance,
    train_local,
    unflatten,
    zero_params,
)
from .posterior import CategoricalPosterior

__all__ = [
    "CategoricalPosterior",
    "Checkpoint",
    "LabeledBatch",
    "MlpParams",
    "accuracy",
    "checkpoint_digest",
    "flatten",
    "forward",
    "init_params",
    "load_checkpoint",
    "loss_and_gradient",
    "objective",
    "parameter_count",
    "predict_proba",
    "save_checkpoint",
    "squared_distance",
    "train_local",
    "unflatten",
    "zero_params",
]

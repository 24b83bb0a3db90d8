"""
Dense multilayer-perceptron classifier with analytic gradients.

Hidden layers use ReLU, the output layer a softmax over L area labels. The
training objective of one client is

    mean cross-entropy over the batch + prox_weight * ||w - u||^2

where ``u`` is an optional prox-center and the norm runs over the flattened
parameter vector (biases included).

Flattened ordering is layer-major; within a layer the weight matrix
(shape out x in, row-major) precedes the bias vector.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.special import log_softmax, softmax

from ..config.config_models import TrainingConfig
from ..exceptions import ContractViolationError, DivergenceError, InvalidInputError
from .posterior import CategoricalPosterior


logger = logging.getLogger(__name__)

Layer = Tuple[np.ndarray, np.ndarray]


@dataclass(frozen=True, eq=False)
class MlpParams:
    """Weights and biases of every dense layer, input to output."""

    layers: Tuple[Layer, ...]

    def __post_init__(self):
        layers = tuple(
            (np.asarray(w, dtype=np.float64), np.asarray(b, dtype=np.float64))
            for w, b in self.layers
        )
        if not layers:
            raise ContractViolationError("An MLP needs at least one layer")
        for t, (w, b) in enumerate(layers):
            if w.ndim != 2 or b.ndim != 1 or b.shape[0] != w.shape[0]:
                raise ContractViolationError(
                    f"Layer {t}: weight {w.shape} and bias {b.shape} do not match"
                )
            if t > 0 and w.shape[1] != layers[t - 1][0].shape[0]:
                raise ContractViolationError(
                    f"Layer {t} expects {w.shape[1]} inputs, "
                    f"previous layer has {layers[t - 1][0].shape[0]} outputs"
                )
        object.__setattr__(self, "layers", layers)

    @property
    def architecture(self) -> Tuple[int, ...]:
        """Layer widths (input-dim, hidden..., L)."""
        return (self.layers[0][0].shape[1],) + tuple(w.shape[0] for w, _ in self.layers)

    @property
    def input_dim(self) -> int:
        return self.architecture[0]

    @property
    def n_labels(self) -> int:
        return self.architecture[-1]

    @property
    def size(self) -> int:
        return parameter_count(self.architecture)

    def is_finite(self) -> bool:
        return all(np.all(np.isfinite(w)) and np.all(np.isfinite(b)) for w, b in self.layers)

    def array_equal(self, other: "MlpParams") -> bool:
        """Bitwise equality of architecture and every entry."""
        return self.architecture == other.architecture and all(
            np.array_equal(w1, w2) and np.array_equal(b1, b2)
            for (w1, b1), (w2, b2) in zip(self.layers, other.layers)
        )

    def step(self, grad: "MlpParams", learning_rate: float) -> "MlpParams":
        """Return ``self - learning_rate * grad``."""
        return MlpParams(
            tuple(
                (w - learning_rate * gw, b - learning_rate * gb)
                for (w, b), (gw, gb) in zip(self.layers, grad.layers)
            )
        )


@dataclass(frozen=True, eq=False)
class LabeledBatch:
    """Feature rows with integer area labels."""

    features: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        features = np.asarray(self.features, dtype=np.float64)
        labels = np.asarray(self.labels)
        if features.ndim != 2 or labels.ndim != 1:
            raise ContractViolationError(
                f"Expected features[n, F] and labels[n], got {features.shape} and {labels.shape}"
            )
        if features.shape[0] != labels.shape[0]:
            raise ContractViolationError(
                f"{features.shape[0]} feature rows but {labels.shape[0]} labels"
            )
        if features.shape[0] < 1:
            raise ContractViolationError("A labeled batch needs at least one sample")
        if labels.size and not np.issubdtype(labels.dtype, np.integer):
            raise ContractViolationError(f"Labels must be integers, got {labels.dtype}")
        if np.any(labels < 0):
            raise ContractViolationError("Labels must be non-negative")
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "labels", labels.astype(np.int64))

    @property
    def size(self) -> int:
        return int(self.labels.shape[0])

    def take(self, indices: np.ndarray) -> "LabeledBatch":
        return LabeledBatch(self.features[indices], self.labels[indices])


def parameter_count(architecture: Sequence[int]) -> int:
    """Total number of parameters d of an architecture."""
    return int(sum(n_in * n_out + n_out for n_in, n_out in zip(architecture[:-1], architecture[1:])))


def _check_architecture(architecture: Sequence[int]) -> Tuple[int, ...]:
    arch = tuple(int(width) for width in architecture)
    if len(arch) < 2 or any(width < 1 for width in arch):
        raise ContractViolationError(
            f"Architecture needs an input width and at least one layer of positive widths: {arch}"
        )
    return arch


def init_params(architecture: Sequence[int], seed: int) -> MlpParams:
    """
    Seeded uniform initialization in +-sqrt(6 / (fan_in + fan_out)), zero biases.

    Args:
        architecture: Layer widths (input-dim, hidden..., L)
        seed: Seed of the initialization stream

    Returns:
        Freshly initialized parameters
    """
    arch = _check_architecture(architecture)
    rng = np.random.default_rng(seed)
    layers = []
    for n_in, n_out in zip(arch[:-1], arch[1:]):
        limit = np.sqrt(6.0 / (n_in + n_out))
        layers.append((rng.uniform(-limit, limit, size=(n_out, n_in)), np.zeros(n_out)))
    return MlpParams(tuple(layers))


def zero_params(architecture: Sequence[int]) -> MlpParams:
    """All-zero parameters of the given architecture."""
    arch = _check_architecture(architecture)
    return MlpParams(
        tuple((np.zeros((n_out, n_in)), np.zeros(n_out)) for n_in, n_out in zip(arch[:-1], arch[1:]))
    )


def flatten(params: MlpParams) -> np.ndarray:
    """Concatenate every layer into the vector w of length d."""
    parts = []
    for w, b in params.layers:
        parts.append(w.ravel(order="C"))
        parts.append(b)
    return np.concatenate(parts)


def unflatten(vector: np.ndarray, architecture: Sequence[int]) -> MlpParams:
    """Inverse of :func:`flatten`."""
    arch = _check_architecture(architecture)
    vector = np.asarray(vector, dtype=np.float64)
    expected = parameter_count(arch)
    if vector.ndim != 1 or vector.size != expected:
        raise ContractViolationError(
            f"Vector of shape {vector.shape} does not fit architecture {arch} (d = {expected})"
        )
    layers = []
    offset = 0
    for n_in, n_out in zip(arch[:-1], arch[1:]):
        w = vector[offset: offset + n_in * n_out].reshape((n_out, n_in)).copy()
        offset += n_in * n_out
        b = vector[offset: offset + n_out].copy()
        offset += n_out
        layers.append((w, b))
    return MlpParams(tuple(layers))


def squared_distance(params: MlpParams, other: MlpParams) -> float:
    """||flatten(params) - flatten(other)||^2 accumulated layer by layer."""
    _check_same_architecture(params, other)
    return float(
        sum(
            np.sum((w1 - w2) ** 2) + np.sum((b1 - b2) ** 2)
            for (w1, b1), (w2, b2) in zip(params.layers, other.layers)
        )
    )


def _check_same_architecture(params: MlpParams, other: MlpParams) -> None:
    if params.architecture != other.architecture:
        raise ContractViolationError(
            f"Architecture mismatch: {params.architecture} vs {other.architecture}"
        )


def _logits(params: MlpParams, features: np.ndarray) -> np.ndarray:
    activation = features
    last = len(params.layers) - 1
    for t, (w, b) in enumerate(params.layers):
        z = activation @ w.T + b
        activation = z if t == last else np.maximum(z, 0.0)
    return activation


def _check_features(params: MlpParams, features: np.ndarray) -> None:
    if features.shape[-1] != params.input_dim:
        raise ContractViolationError(
            f"Feature length {features.shape[-1]} does not match input dimension {params.input_dim}"
        )
    if not np.all(np.isfinite(features)):
        raise InvalidInputError("Features contain non-finite values")


def predict_proba(params: MlpParams, features: np.ndarray) -> np.ndarray:
    """
    Softmax outputs for a matrix of feature rows.

    Args:
        params: Model parameters
        features: real[n x input-dim]

    Returns:
        real[n x L], each row a categorical distribution
    """
    features = np.atleast_2d(np.asarray(features, dtype=np.float64))
    _check_features(params, features)
    return softmax(_logits(params, features), axis=1)


def forward(params: MlpParams, features: np.ndarray) -> CategoricalPosterior:
    """
    Categorical posterior of a single feature vector.

    Args:
        params: Model parameters
        features: real[input-dim]

    Returns:
        CategoricalPosterior over the L labels
    """
    features = np.asarray(features, dtype=np.float64)
    if features.ndim != 1:
        raise ContractViolationError(f"forward expects one feature vector, got shape {features.shape}")
    probs = predict_proba(params, features[np.newaxis, :])[0]
    # renormalize so the 1e-12 sum contract holds after rounding
    return CategoricalPosterior(probs / probs.sum())


def loss_and_gradient(
    params: MlpParams,
    batch: LabeledBatch,
    prox_center: Optional[MlpParams] = None,
    prox_weight: float = 0.0,
) -> Tuple[float, MlpParams]:
    """
    Objective value and its exact gradient.

    Args:
        params: Point of evaluation
        batch: Non-empty labeled batch
        prox_center: Optional center of the proximal term
        prox_weight: Non-negative weight of ``||params - prox_center||^2``

    Returns:
        (loss, gradient shaped like params)
    """
    if prox_weight < 0:
        raise ContractViolationError(f"prox_weight must be >= 0, got {prox_weight}")
    if prox_center is not None:
        _check_same_architecture(params, prox_center)
    _check_features(params, batch.features)
    if np.any(batch.labels >= params.n_labels):
        raise ContractViolationError(
            f"Batch holds labels >= L = {params.n_labels}"
        )

    n = batch.size
    activations = [batch.features]
    pre_activations = []
    last = len(params.layers) - 1
    for t, (w, b) in enumerate(params.layers):
        z = activations[-1] @ w.T + b
        pre_activations.append(z)
        if t < last:
            activations.append(np.maximum(z, 0.0))

    log_probs = log_softmax(pre_activations[-1], axis=1)
    rows = np.arange(n)
    loss = float(-np.mean(log_probs[rows, batch.labels]))

    delta = np.exp(log_probs)
    delta[rows, batch.labels] -= 1.0
    delta /= n

    grads: list[Layer] = [None] * len(params.layers)  # type: ignore[list-item]
    for t in range(last, -1, -1):
        w, _ = params.layers[t]
        grads[t] = (delta.T @ activations[t], delta.sum(axis=0))
        if t > 0:
            delta = (delta @ w) * (pre_activations[t - 1] > 0.0)

    if prox_center is not None and prox_weight > 0.0:
        loss += prox_weight * squared_distance(params, prox_center)
        grads = [
            (gw + 2.0 * prox_weight * (w - cw), gb + 2.0 * prox_weight * (b - cb))
            for (gw, gb), (w, b), (cw, cb) in zip(grads, params.layers, prox_center.layers)
        ]

    return loss, MlpParams(tuple(grads))


def objective(
    params: MlpParams,
    batch: LabeledBatch,
    prox_center: Optional[MlpParams] = None,
    prox_weight: float = 0.0,
) -> float:
    """Loss part of :func:`loss_and_gradient`."""
    if prox_center is not None:
        _check_same_architecture(params, prox_center)
    log_probs = log_softmax(_logits(params, batch.features), axis=1)
    loss = float(-np.mean(log_probs[np.arange(batch.size), batch.labels]))
    if prox_center is not None and prox_weight > 0.0:
        loss += prox_weight * squared_distance(params, prox_center)
    return loss


def accuracy(params: MlpParams, batch: LabeledBatch) -> float:
    """Share of samples whose argmax (lowest index on ties) hits the label."""
    predictions = np.argmax(predict_proba(params, batch.features), axis=1)
    return float(np.mean(predictions == batch.labels))


def train_local(
    params: MlpParams,
    data: LabeledBatch,
    config: TrainingConfig,
    prox_center: Optional[MlpParams] = None,
    prox_weight: float = 0.0,
    rng: Optional[np.random.Generator] = None,
) -> MlpParams:
    """
    Plain (mini-batch) gradient descent on the regularized local objective.

    Args:
        params: Starting point
        data: Local dataset
        config: Optimizer settings
        prox_center: Optional prox-center u
        prox_weight: Weight of the proximal term
        rng: Shuffling stream; defaults to one seeded with ``config.rng_seed``

    Returns:
        Updated parameters with the same architecture
    """
    if rng is None:
        rng = np.random.default_rng(config.rng_seed)

    n = data.size
    full_batch = (
        config.mode == "deterministic"
        or config.batch_size == "full"
        or config.batch_size >= n
    )

    current = params
    for epoch in range(1, config.epochs + 1):
        if full_batch:
            batches = [data]
        else:
            order = rng.permutation(n)
            batches = [
                data.take(order[start: start + config.batch_size])
                for start in range(0, n, config.batch_size)
            ]
        for batch in batches:
            loss, grad = loss_and_gradient(current, batch, prox_center, prox_weight)
            if not np.isfinite(loss):
                raise DivergenceError(f"Non-finite loss during epoch {epoch}", epoch=epoch)
            current = current.step(grad, config.learning_rate)

    if not current.is_finite():
        raise DivergenceError(
            f"Non-finite parameters after epoch {config.epochs}", epoch=config.epochs
        )
    return current

"""Multilayer perceptron trained with per-sample backpropagation.

Unipolar sigmoid units throughout, bias handled as a constant-1 extra input
per layer, plain delta-rule updates (no momentum, no decay).  Class targets
are encoded on a [target_off, target_on] interval rather than {0, 1} so the
sigmoid never has to chase its asymptotes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from ._validation import check_fitted, check_image_matrix, check_vector

INIT_WEIGHT_RANGE = 0.05
_SIGMOID_CLAMP = 40.0


def sigmoid(z: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-np.clip(z, -_SIGMOID_CLAMP, _SIGMOID_CLAMP)))


@dataclass
class MlpNetwork:
    """Layered weights; ``weights[l]`` has shape (fan_out, fan_in + 1) with
    the bias in the last column."""

    layer_sizes: tuple[int, ...]
    weights: list[np.ndarray]

    def __post_init__(self) -> None:
        if len(self.weights) != len(self.layer_sizes) - 1:
            raise ValueError("one weight matrix per non-input layer required")
        for l, w in enumerate(self.weights):
            expected = (self.layer_sizes[l + 1], self.layer_sizes[l] + 1)
            if w.shape != expected:
                raise ValueError(
                    f"layer {l + 1} weights have shape {w.shape}, expected {expected}"
                )
            if not np.all(np.isfinite(w)):
                raise ValueError(f"layer {l + 1} weights contain non-finite values")

    def copy(self) -> "MlpNetwork":
        return MlpNetwork(self.layer_sizes, [w.copy() for w in self.weights])

    @property
    def n_inputs(self) -> int:
        return self.layer_sizes[0]

    @property
    def n_outputs(self) -> int:
        return self.layer_sizes[-1]


@dataclass(frozen=True)
class TrainConfig:
    """Learning rate, stopping rule, and target-interval conventions."""

    learning_rate: float = 0.5
    error_threshold: float = 0.01
    max_epochs: int = 5000
    rng_seed: int = 0
    target_on: float = 0.8
    target_off: float = 0.2
    shuffle: bool = False

    def __post_init__(self) -> None:
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if not self.error_threshold > 0:
            raise ValueError("error_threshold must be positive")
        if self.max_epochs < 1:
            raise ValueError("max_epochs must be at least 1")
        if not 0.0 < self.target_off < self.target_on < 1.0:
            raise ValueError("need 0 < target_off < target_on < 1")


def init_network(layer_sizes: Sequence[int], seed: int) -> MlpNetwork:
    """Fresh network with all weights uniform on [-0.05, 0.05]."""
    sizes = tuple(int(s) for s in layer_sizes)
    if len(sizes) < 2:
        raise ValueError("need at least an input and an output layer")
    if any(s < 1 for s in sizes):
        raise ValueError("every layer needs at least one node")
    rng = np.random.default_rng(seed)
    weights = [
        rng.uniform(-INIT_WEIGHT_RANGE, INIT_WEIGHT_RANGE, size=(sizes[l + 1], sizes[l] + 1))
        for l in range(len(sizes) - 1)
    ]
    return MlpNetwork(sizes, weights)


def _augment(a: np.ndarray) -> np.ndarray:
    aug = np.empty(a.shape[0] + 1)
    aug[:-1] = a
    aug[-1] = 1.0
    return aug


def _forward(net: MlpNetwork, x: np.ndarray) -> list[np.ndarray]:
    activations = [x]
    for w in net.weights:
        x = sigmoid(w @ _augment(x))
        activations.append(x)
    return activations


def forward(net: MlpNetwork, x: np.ndarray) -> list[np.ndarray]:
    """Activations of every layer, input first, outputs last."""
    return _forward(net, check_vector(x, net.n_inputs))


def _step(
    net: MlpNetwork, x: np.ndarray, target: np.ndarray, learning_rate: float
) -> float:
    activations = _forward(net, x)
    outputs = activations[-1]
    error = 0.5 * float(np.sum((target - outputs) ** 2))

    deltas = [np.empty(0)] * len(net.weights)
    deltas[-1] = (target - outputs) * outputs * (1.0 - outputs)
    for l in range(len(net.weights) - 2, -1, -1):
        back = net.weights[l + 1][:, :-1].T @ deltas[l + 1]
        a = activations[l + 1]
        deltas[l] = back * a * (1.0 - a)
    for l, w in enumerate(net.weights):
        w += learning_rate * np.outer(deltas[l], _augment(activations[l]))
    return error


def backprop_step(
    net: MlpNetwork, x: np.ndarray, target: np.ndarray, learning_rate: float
) -> tuple[MlpNetwork, float]:
    """One delta-rule update on one sample; returns (net, sample error).

    Output deltas are (d - y) y (1 - y); hidden deltas propagate through the
    pre-update downstream weights; every layer is then updated at once.  The
    network is updated in place and returned for chaining.  The error is
    half the squared output gap before the update.
    """
    x = check_vector(x, net.n_inputs)
    target = check_vector(target, net.n_outputs)
    return net, _step(net, x, target, learning_rate)


def train(
    net: MlpNetwork,
    dataset: Sequence[tuple[np.ndarray, np.ndarray]],
    config: TrainConfig,
) -> tuple[MlpNetwork, list[float]]:
    """Per-sample training epochs until the epoch error reaches the threshold.

    The epoch error is the sum over samples of the per-sample half squared
    error, accumulated as the epoch's updates happen.  Returns the trained
    network (the same object, updated in place) and the per-epoch error
    trace; the trace is not guaranteed monotone.
    """
    if not dataset:
        raise ValueError("cannot train on an empty dataset")
    samples = [
        (check_vector(x, net.n_inputs), check_vector(t, net.n_outputs))
        for x, t in dataset
    ]
    rng = np.random.default_rng(config.rng_seed)
    trace: list[float] = []
    order = np.arange(len(samples))
    for _ in range(config.max_epochs):
        if config.shuffle:
            order = rng.permutation(len(samples))
        epoch_error = 0.0
        for i in order:
            x, target = samples[i]
            epoch_error += _step(net, x, target, config.learning_rate)
        trace.append(epoch_error)
        if epoch_error <= config.error_threshold:
            break
    return net, trace


def classify(net: MlpNetwork, x: np.ndarray) -> int:
    """Index of the strongest output node; ties go to the lowest index."""
    return int(np.argmax(forward(net, x)[-1]))


def encode_targets(
    labels: Sequence[int], n_classes: int, target_on: float = 0.8, target_off: float = 0.2
) -> np.ndarray:
    """Per label, a target vector with target_on at the class, target_off elsewhere."""
    out = np.full((len(labels), n_classes), target_off)
    for i, lab in enumerate(labels):
        if not 0 <= lab < n_classes:
            raise ValueError(f"label {lab} outside [0, {n_classes})")
        out[i, lab] = target_on
    return out


class MlpClassifier(BaseEstimator, ClassifierMixin):
    """Classifier wrapper: one output node per class, argmax prediction.

    ``hidden_layer_sizes`` may be empty for a single-layer perceptron.
    ``error_threshold`` is taken per run; pass ``None`` to use
    0.01 x n_samples, which scales the stopping rule with the dataset.
    """

    def __init__(
        self,
        hidden_layer_sizes: tuple[int, ...] = (5,),
        learning_rate: float = 0.5,
        error_threshold: float | None = None,
        max_epochs: int = 5000,
        seed: int = 0,
        shuffle: bool = False,
        target_on: float = 0.8,
        target_off: float = 0.2,
    ):
        self.hidden_layer_sizes = hidden_layer_sizes
        self.learning_rate = learning_rate
        self.error_threshold = error_threshold
        self.max_epochs = max_epochs
        self.seed = seed
        self.shuffle = shuffle
        self.target_on = target_on
        self.target_off = target_off

    def fit(self, X, y) -> "MlpClassifier":
        data = check_image_matrix(X, min_rows=1)
        y = np.asarray(y)
        if y.shape[0] != data.shape[0]:
            raise ValueError("X and y disagree on the number of samples")
        self.classes_, encoded = np.unique(y, return_inverse=True)
        threshold = self.error_threshold
        if threshold is None:
            threshold = 0.01 * data.shape[0]
        config = TrainConfig(
            learning_rate=self.learning_rate,
            error_threshold=threshold,
            max_epochs=self.max_epochs,
            rng_seed=self.seed,
            target_on=self.target_on,
            target_off=self.target_off,
            shuffle=self.shuffle,
        )
        sizes = (data.shape[1], *self.hidden_layer_sizes, len(self.classes_))
        targets = encode_targets(encoded, len(self.classes_), self.target_on, self.target_off)
        net = init_network(sizes, self.seed)
        dataset = [(data[i], targets[i]) for i in range(data.shape[0])]
        self.network_, self.error_trace_ = train(net, dataset, config)
        self.error_threshold_ = threshold
        return self

    def predict(self, X) -> np.ndarray:
        check_fitted(self, "network_")
        data = check_image_matrix(X, min_rows=1, n_cols=self.network_.n_inputs)
        return self.classes_[[classify(self.network_, row) for row in data]]

    @property
    def converged_(self) -> bool:
        check_fitted(self, "network_")
        return self.error_trace_[-1] <= self.error_threshold_

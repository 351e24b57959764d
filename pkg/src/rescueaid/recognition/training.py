"""Mini-batch SGD training with a finite-difference gradient check.

Training is deliberately plain: seeded Xavier init, seeded shuffling,
categorical cross-entropy, constant learning rate. Given the same seed,
config, and dataset, the trained parameters are bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from rescueaid.recognition.network import Layer, MlpModel, forward, softmax

LOG_EPS = 1e-12


class TrainingDivergedError(RuntimeError):
    """Loss became non-finite; message names the epoch and batch."""


@dataclass
class TrainingConfig:
    hidden_layout: list[int] = field(default_factory=lambda: [64, 64])
    learning_rate: float = 0.1
    epochs: int = 30
    batch_size: int = 32
    seed: int = 0
    validation_split: float = 0.2

    def __post_init__(self) -> None:
        if min(self.learning_rate, self.epochs, self.batch_size) < 0:
            raise ValueError("learning rate, epochs, and batch size must be non-negative")
        if not self.hidden_layout or min(self.hidden_layout) <= 0:
            raise ValueError("hidden layout must list positive widths")
        if not 0.0 < self.validation_split < 1.0:
            raise ValueError("validation split must lie in (0, 1)")


def cross_entropy(probabilities: np.ndarray, labels: np.ndarray) -> float:
    """Mean negative log-likelihood of the true labels."""
    probabilities = np.atleast_2d(probabilities)
    picked = probabilities[np.arange(len(labels)), labels]
    return float(-np.log(np.maximum(picked, LOG_EPS)).mean())


def _forward_trace(model: MlpModel, x: np.ndarray) -> list[np.ndarray]:
    """Activations per layer, input first, probabilities last."""
    activations = [x]
    a = x
    for layer in model.layers:
        z = a @ layer.weights + layer.bias
        a = np.maximum(z, 0.0) if layer.activation == "relu" else softmax(z)
        activations.append(a)
    return activations


def _backprop(model: MlpModel, x: np.ndarray, labels: np.ndarray) -> tuple[float, list[tuple[np.ndarray, np.ndarray]]]:
    """Loss and per-layer (dW, db) for one batch."""
    activations = _forward_trace(model, x)
    probabilities = activations[-1]
    batch = len(labels)
    loss = cross_entropy(probabilities, labels)

    one_hot = np.zeros_like(probabilities)
    one_hot[np.arange(batch), labels] = 1.0
    delta = (probabilities - one_hot) / batch

    gradients: list[tuple[np.ndarray, np.ndarray]] = []
    for i in range(len(model.layers) - 1, -1, -1):
        a_prev = activations[i]
        gradients.append((a_prev.T @ delta, delta.sum(axis=0)))
        if i > 0:
            delta = delta @ model.layers[i].weights.T
            delta = delta * (activations[i] > 0.0)  # relu mask
    gradients.reverse()
    return loss, gradients


def split_dataset(x: np.ndarray, y: np.ndarray, validation_split: float, seed: int):
    """Seeded shuffle, then split into (train_x, train_y, val_x, val_y)."""
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(y))
    cut = max(1, int(round(len(y) * (1.0 - validation_split))))
    train_idx, val_idx = order[:cut], order[cut:]
    return x[train_idx], y[train_idx], x[val_idx], y[val_idx]


def train(model: MlpModel, x: np.ndarray, y: np.ndarray, config: TrainingConfig) -> tuple[MlpModel, list[float]]:
    """Train a copy of the model; returns it with the per-epoch loss history.

    Shuffling draws from a stream seeded by ``config.seed``, independent of
    the init stream, so (seed, config, dataset) fully determine the result.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if x.shape[1] != model.input_dim:
        raise ValueError("dataset feature dimension does not match the model")
    if y.min() < 0 or y.max() >= model.output_dim:
        raise ValueError("labels must be group ordinals within the output dimension")

    model = model.copy()
    rng = np.random.default_rng(config.seed)
    history: list[float] = []
    for epoch in range(config.epochs):
        order = rng.permutation(len(y))
        epoch_loss = 0.0
        batches = 0
        for start in range(0, len(y), config.batch_size):
            idx = order[start : start + config.batch_size]
            loss, gradients = _backprop(model, x[idx], y[idx])
            if not np.isfinite(loss):
                raise TrainingDivergedError(
                    f"non-finite loss at epoch {epoch}, batch {batches} (lr={config.learning_rate})"
                )
            for layer, (dw, db) in zip(model.layers, gradients):
                layer.weights -= config.learning_rate * dw
                layer.bias -= config.learning_rate * db
            epoch_loss += loss
            batches += 1
        history.append(epoch_loss / max(batches, 1))
    return model, history


def gradient_check(model: MlpModel, x: np.ndarray, label: int, step: float = 1e-5) -> float:
    """Max guarded relative deviation between analytic and numeric gradients.

    Central differences with the given step are taken over every single
    parameter. The deviation denominator is floored at 1e-6 so exact zeros
    and float noise on near-zero gradients do not explode the ratio.
    """
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    labels = np.array([label] * len(x), dtype=np.int64)
    _, gradients = _backprop(model, x, labels)

    worst = 0.0
    for layer, (dw, db) in zip(model.layers, gradients):
        for array, grad in ((layer.weights, dw), (layer.bias, db)):
            flat = array.reshape(-1)
            analytic = grad.reshape(-1)
            for i in range(flat.size):
                original = flat[i]
                flat[i] = original + step
                up = cross_entropy(forward(model, x), labels)
                flat[i] = original - step
                down = cross_entropy(forward(model, x), labels)
                flat[i] = original
                numeric = (up - down) / (2.0 * step)
                deviation = abs(analytic[i] - numeric) / max(abs(analytic[i]) + abs(numeric), 1e-6)
                worst = max(worst, deviation)
    return worst

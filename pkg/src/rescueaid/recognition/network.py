"""The feedforward classifier: relu hidden layers, softmax head.

Plain numpy, float64 throughout. Inference is read-only on an immutable
model, so concurrent sessions may share one instance; replacing a model is
an atomic reference swap done between calls.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

import numpy as np

from rescueaid.groups import NUM_GROUPS, ComplicationGroup
from rescueaid.recognition.features import FeatureVector

MODEL_FORMAT_VERSION = "1.0"

ACTIVATIONS = ("relu", "softmax")


@dataclass
class Layer:
    weights: np.ndarray  # shape (fan_in, fan_out)
    bias: np.ndarray  # shape (fan_out,)
    activation: str

    def __post_init__(self) -> None:
        self.weights = np.asarray(self.weights, dtype=np.float64)
        self.bias = np.asarray(self.bias, dtype=np.float64)
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"unknown activation {self.activation!r}")
        if self.weights.ndim != 2 or self.bias.shape != (self.weights.shape[1],):
            raise ValueError("layer weight/bias shapes are inconsistent")


@dataclass
class MlpModel:
    layers: list[Layer]
    schema_id: str = ""

    def __post_init__(self) -> None:
        if not self.layers:
            raise ValueError("model needs at least one layer")
        for previous, current in zip(self.layers, self.layers[1:]):
            if previous.weights.shape[1] != current.weights.shape[0]:
                raise ValueError("adjacent layer dimensions do not chain")
        for layer in self.layers[:-1]:
            if layer.activation != "relu":
                raise ValueError("hidden layers must use relu")
        if self.layers[-1].activation != "softmax":
            raise ValueError("final layer must use softmax")

    @property
    def input_dim(self) -> int:
        return self.layers[0].weights.shape[0]

    @property
    def output_dim(self) -> int:
        return self.layers[-1].weights.shape[1]

    def copy(self) -> "MlpModel":
        return MlpModel(
            layers=[Layer(l.weights.copy(), l.bias.copy(), l.activation) for l in self.layers],
            schema_id=self.schema_id,
        )

    def to_json(self) -> str:
        return json.dumps(
            {
                "format_version": MODEL_FORMAT_VERSION,
                "schema_id": self.schema_id,
                "layers": [
                    {
                        "in_dim": int(l.weights.shape[0]),
                        "out_dim": int(l.weights.shape[1]),
                        "activation": l.activation,
                        "weights": l.weights.reshape(-1).tolist(),  # row-major
                        "bias": l.bias.tolist(),
                    }
                    for l in self.layers
                ],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "MlpModel":
        payload = json.loads(text)
        version = payload.get("format_version", "")
        if version.split(".")[0] != MODEL_FORMAT_VERSION.split(".")[0]:
            raise ValueError(f"unsupported model format version {version!r}")
        layers = []
        for raw in payload["layers"]:
            weights = np.array(raw["weights"], dtype=np.float64).reshape(raw["in_dim"], raw["out_dim"])
            layers.append(Layer(weights=weights, bias=np.array(raw["bias"]), activation=raw["activation"]))
        return cls(layers=layers, schema_id=payload.get("schema_id", ""))

    def save(self, path: Union[str, Path]) -> None:
        Path(path).write_text(self.to_json() + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: Union[str, Path]) -> "MlpModel":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


@dataclass
class ComplicationDistribution:
    """Probability vector over the ten groups, indexed by ordinal."""

    probabilities: np.ndarray
    produced_at: int = 0  # epoch ms (simulation clock in scripted runs)

    def __post_init__(self) -> None:
        self.probabilities = np.asarray(self.probabilities, dtype=np.float64)
        if self.probabilities.shape != (NUM_GROUPS,):
            raise ValueError(f"distribution must have {NUM_GROUPS} entries")
        if np.any(self.probabilities < -1e-12) or np.any(self.probabilities > 1 + 1e-12):
            raise ValueError("probabilities outside [0, 1]")
        if abs(float(self.probabilities.sum()) - 1.0) > 1e-9:
            raise ValueError("probabilities must sum to 1 within 1e-9")

    def argmax_group(self) -> ComplicationGroup:
        """Highest-probability group; exact ties go to the lowest ordinal."""
        return ComplicationGroup.from_ordinal(int(np.argmax(self.probabilities)))

    def entropy(self) -> float:
        p = self.probabilities[self.probabilities > 0]
        return float(-(p * np.log(p)).sum())

    def max_probability(self) -> float:
        return float(self.probabilities.max())

    def to_list(self) -> list[float]:
        return [float(x) for x in self.probabilities]


def softmax(logits: np.ndarray) -> np.ndarray:
    """Row-wise softmax with max subtraction for numerical stability."""
    logits = np.asarray(logits, dtype=np.float64)
    shifted = logits - logits.max(axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=-1, keepdims=True)


def forward(model: MlpModel, x: np.ndarray) -> np.ndarray:
    """Run inputs through the network; accepts one vector or a batch.

    Raises on non-finite input; the output rows are valid probability
    vectors by construction.
    """
    x = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(x)):
        raise ValueError("forward pass requires finite inputs")
    single = x.ndim == 1
    a = x[None, :] if single else x
    if a.shape[1] != model.input_dim:
        raise ValueError(f"input dimension {a.shape[1]} != model input {model.input_dim}")
    for layer in model.layers:
        z = a @ layer.weights + layer.bias
        a = np.maximum(z, 0.0) if layer.activation == "relu" else softmax(z)
    return a[0] if single else a


def classify(model: MlpModel, features: Union[FeatureVector, np.ndarray], produced_at: int = 0) -> ComplicationDistribution:
    """Forward pass packaged as a ComplicationDistribution."""
    if model.output_dim != NUM_GROUPS:
        raise ValueError(f"classifier head must have {NUM_GROUPS} outputs")
    values = features.values if isinstance(features, FeatureVector) else features
    return ComplicationDistribution(probabilities=forward(model, values), produced_at=produced_at)


def init_model(input_dim: int, hidden: list[int], output_dim: int = NUM_GROUPS, seed: int = 0, schema_id: str = "") -> MlpModel:
    """Xavier-uniform initialization from a seeded stream; biases zero."""
    rng = np.random.default_rng(seed)
    dims = [input_dim] + list(hidden) + [output_dim]
    layers = []
    for i, (fan_in, fan_out) in enumerate(zip(dims, dims[1:])):
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        weights = rng.uniform(-limit, limit, size=(fan_in, fan_out))
        activation = "softmax" if i == len(dims) - 2 else "relu"
        layers.append(Layer(weights=weights, bias=np.zeros(fan_out), activation=activation))
    return MlpModel(layers=layers, schema_id=schema_id)

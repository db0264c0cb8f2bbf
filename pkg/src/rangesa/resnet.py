"""Residual networks: forward evaluation, named architectures, weight files.

All math is float64: the annealer compares tiny value differences and
float32 noise would pollute acceptance decisions.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .objectives import Objective

WEIGHT_FORMAT_VERSION = 1

ACTIVATIONS = ("relu", "sigmoid", "tanh")


class WeightFormatError(ValueError):
    """Raised when a weight file is malformed or violates the width chain."""


def _relu(z):
    return np.maximum(z, 0.0)


def _relu_deriv(z):
    # subgradient 0 at exactly 0
    return (z > 0.0).astype(float)


def _sigmoid(z):
    return 1.0 / (1.0 + np.exp(-z))


def _sigmoid_deriv(z):
    s = _sigmoid(z)
    return s * (1.0 - s)


def _tanh_deriv(z):
    return 1.0 - np.tanh(z) ** 2


_ACT_FNS = {
    "relu": (_relu, _relu_deriv),
    "sigmoid": (_sigmoid, _sigmoid_deriv),
    "tanh": (np.tanh, _tanh_deriv),
}


@dataclass
class Layer:
    """One affine stage, optionally followed by activation and identity skip."""

    weights: np.ndarray  # (out_width, in_width)
    bias: np.ndarray     # (out_width,)
    has_activation: bool = True
    has_skip: bool = False

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=float)
        self.bias = np.asarray(self.bias, dtype=float)
        if self.weights.ndim != 2 or self.bias.shape != (self.weights.shape[0],):
            raise ValueError("weights must be (out, in) with matching bias")
        if self.has_skip and self.in_width != self.out_width:
            raise ValueError("identity skip requires in_width == out_width")

    @property
    def in_width(self) -> int:
        return self.weights.shape[1]

    @property
    def out_width(self) -> int:
        return self.weights.shape[0]


@dataclass
class ResNet:
    """Scalar-output residual network: affine + activation (+ identity skip) stack."""

    layers: list[Layer]
    activation: str = "relu"
    input_dim: int = field(init=False)

    def __post_init__(self):
        if not self.layers:
            raise ValueError("network needs at least one layer")
        if self.activation not in _ACT_FNS:
            raise ValueError(f"unknown activation {self.activation!r}; one of {ACTIVATIONS}")
        for a, b in zip(self.layers, self.layers[1:]):
            if a.out_width != b.in_width:
                raise ValueError(
                    f"width chain broken: layer out {a.out_width} feeds layer in {b.in_width}"
                )
        out = self.layers[-1]
        if out.out_width != 1 or out.has_activation or out.has_skip:
            raise ValueError("output layer must be plain affine with a single output")
        self.input_dim = self.layers[0].in_width

    @property
    def num_params(self) -> int:
        return sum((lyr.in_width + 1) * lyr.out_width for lyr in self.layers)

    def widths(self) -> list[int]:
        return [self.input_dim] + [lyr.out_width for lyr in self.layers]

    def forward(self, x) -> float:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.input_dim,):
            raise ValueError(f"expected input of dimension {self.input_dim}, got shape {x.shape}")
        act, _ = _ACT_FNS[self.activation]
        h = x
        for idx, lyr in enumerate(self.layers, start=1):
            z = lyr.weights @ h + lyr.bias
            a = act(z) if lyr.has_activation else z
            h = a + h if lyr.has_skip else a
            if not np.all(np.isfinite(h)):
                raise FloatingPointError(f"non-finite value at layer {idx}")
        return float(h[0])

    def forward_batch(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.input_dim:
            raise ValueError(f"expected (n, {self.input_dim}) batch, got shape {X.shape}")
        act, _ = _ACT_FNS[self.activation]
        h = X
        for idx, lyr in enumerate(self.layers, start=1):
            z = h @ lyr.weights.T + lyr.bias
            a = act(z) if lyr.has_activation else z
            h = a + h if lyr.has_skip else a
            if not np.all(np.isfinite(h)):
                raise FloatingPointError(f"non-finite value at layer {idx}")
        return h[:, 0]

    def as_objective(self, name: str | None = None) -> Objective:
        def fn(x):
            x = np.asarray(x, dtype=float)
            if x.ndim == 1:
                return self.forward(x)
            return self.forward_batch(x)

        return Objective(fn, self.input_dim, name=name or "resnet")

    def copy(self) -> "ResNet":
        return ResNet(
            layers=[
                Layer(lyr.weights.copy(), lyr.bias.copy(), lyr.has_activation, lyr.has_skip)
                for lyr in self.layers
            ],
            activation=self.activation,
        )

    # --- serialization -------------------------------------------------

    def save(self, path) -> None:
        doc = {
            "format_version": WEIGHT_FORMAT_VERSION,
            "activation": self.activation,
            "input_dim": self.input_dim,
            "layers": [
                {
                    "in_width": lyr.in_width,
                    "out_width": lyr.out_width,
                    "has_skip": lyr.has_skip,
                    "has_activation": lyr.has_activation,
                    "weights": lyr.weights.ravel().tolist(),
                    "bias": lyr.bias.tolist(),
                }
                for lyr in self.layers
            ],
        }
        Path(path).write_text(json.dumps(doc) + "\n")

    @classmethod
    def load(cls, path) -> "ResNet":
        try:
            doc = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise WeightFormatError(f"malformed weight file {path}: {exc}") from exc
        try:
            version = doc["format_version"]
            if version != WEIGHT_FORMAT_VERSION:
                raise WeightFormatError(f"unsupported format_version {version}")
            layers = []
            for i, entry in enumerate(doc["layers"]):
                n_in, n_out = int(entry["in_width"]), int(entry["out_width"])
                w = np.asarray(entry["weights"], dtype=float)
                if w.size != n_in * n_out:
                    raise WeightFormatError(
                        f"layer {i}: field 'weights' has {w.size} numbers, "
                        f"expected {n_out}x{n_in}"
                    )
                b = np.asarray(entry["bias"], dtype=float)
                if b.size != n_out:
                    raise WeightFormatError(
                        f"layer {i}: field 'bias' has {b.size} numbers, expected {n_out}"
                    )
                layers.append(
                    Layer(
                        weights=w.reshape(n_out, n_in),
                        bias=b,
                        has_activation=bool(entry["has_activation"]),
                        has_skip=bool(entry["has_skip"]),
                    )
                )
            net = cls(layers=layers, activation=doc["activation"])
        except KeyError as exc:
            raise WeightFormatError(f"weight file missing field {exc}") from exc
        except ValueError as exc:
            raise WeightFormatError(str(exc)) from exc
        return net


def build_resnet(
    widths: list[int],
    activation: str = "relu",
    seed: int = 0,
) -> ResNet:
    """Build a ResNet from the full width chain [d, h1, ..., hk, 1].

    Hidden layers get the activation; the identity skip is active exactly on
    equal-width hidden transitions. Weights use uniform He-style init
    (+- sqrt(6/in_width)) from the seeded generator.
    """
    if len(widths) < 2 or widths[-1] != 1:
        raise ValueError("widths must be [input_dim, hidden..., 1]")
    rng = np.random.default_rng(seed)
    layers = []
    n_layers = len(widths) - 1
    for i in range(n_layers):
        n_in, n_out = widths[i], widths[i + 1]
        is_output = i == n_layers - 1
        bound = np.sqrt(6.0 / n_in)
        layers.append(
            Layer(
                weights=rng.uniform(-bound, bound, size=(n_out, n_in)),
                bias=np.zeros(n_out),
                has_activation=not is_output,
                has_skip=(not is_output) and i > 0 and n_in == n_out,
            )
        )
    return ResNet(layers=layers, activation=activation)


def _scaled(hidden: list[int], width_scale: float) -> list[int]:
    return [max(1, int(round(h * width_scale))) for h in hidden]


def architecture_ackley(seed: int = 0, width_scale: float = 1.0) -> ResNet:
    """128-in/out stack with four 256-wide residual blocks, 2-d input."""
    hidden = _scaled([128, 256, 256, 256, 256, 128], width_scale)
    return build_resnet([2] + hidden + [1], activation="relu", seed=seed)


def architecture_dropwave(seed: int = 0, width_scale: float = 1.0) -> ResNet:
    """Deeper stack with 512-wide middle blocks, 2-d input."""
    hidden = _scaled([128, 256, 256, 512, 512, 512, 256, 128], width_scale)
    return build_resnet([2] + hidden + [1], activation="relu", seed=seed)


def architecture_multimin(seed: int = 0, width_scale: float = 1.0) -> ResNet:
    """Same stack as the drop-wave network but with a 3-d input."""
    hidden = _scaled([128, 256, 256, 512, 512, 512, 256, 128], width_scale)
    return build_resnet([3] + hidden + [1], activation="relu", seed=seed)

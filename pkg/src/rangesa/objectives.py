"""Black-box objectives, analytic benchmark functions and noisy sample generation."""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .domain import BoxDomain


class Objective:
    """A scalar black-box function on R^d.

    Wraps a vectorized callable taking an (..., d) array and returning (...)
    values. Evaluation must be deterministic; the annealer only ever queries
    points, never gradients.
    """

    def __init__(self, fn, dim: int, name: str | None = None):
        self._fn = fn
        self.dim = int(dim)
        self.name = name

    def __call__(self, x) -> float:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise ValueError(f"expected point of dimension {self.dim}, got shape {x.shape}")
        return float(self._fn(x))

    def evaluate_many(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.dim:
            raise ValueError(f"expected (n, {self.dim}) batch, got shape {X.shape}")
        return np.asarray(self._fn(X), dtype=float)

    def negated(self) -> "Objective":
        name = f"neg_{self.name}" if self.name else None
        return Objective(lambda x: -self._fn(x), self.dim, name=name)

    def __repr__(self):
        return f"Objective(name={self.name!r}, dim={self.dim})"


def _split2(p):
    p = np.asarray(p, dtype=float)
    if p.shape[-1] != 2:
        raise ValueError(f"expected 2-dimensional input, got shape {p.shape}")
    return p[..., 0], p[..., 1]


def ackley(p):
    """Ackley benchmark on R^2; global minimum 0 at the origin."""
    x1, x2 = _split2(p)
    return (
        -20.0 * np.exp(-0.2 * np.sqrt(0.5 * (x1**2 + x2**2)))
        - np.exp(0.5 * (np.cos(2.0 * np.pi * x1) + np.cos(2.0 * np.pi * x2)))
        + np.e
        + 20.0
    )


def drop_wave(p):
    """Drop-Wave benchmark on R^2; multimodal, range within [-1, 0]."""
    x1, x2 = _split2(p)
    r2 = x1**2 + x2**2
    return -(1.0 + np.cos(12.0 * np.sqrt(r2))) / (0.5 * r2 + 2.0)


def multi_minima(p):
    """Separable quartic on R^3 with 8 global minima at (+-1, +-1, +-1)."""
    p = np.asarray(p, dtype=float)
    if p.shape[-1] != 3:
        raise ValueError(f"expected 3-dimensional input, got shape {p.shape}")
    return np.sum((p**2 - 1.0) ** 2, axis=-1)


BUILTIN_OBJECTIVES = {
    "ackley": Objective(ackley, 2, name="ackley"),
    "dropwave": Objective(drop_wave, 2, name="dropwave"),
    "multimin": Objective(multi_minima, 3, name="multimin"),
}


def builtin(name: str) -> Objective:
    try:
        return BUILTIN_OBJECTIVES[name]
    except KeyError:
        raise ValueError(
            f"unknown objective {name!r}; builtins are: {', '.join(sorted(BUILTIN_OBJECTIVES))}"
        ) from None


@dataclass
class Dataset:
    """Noisy sample (x_i, f(x_i) + eps_i) drawn uniformly from a box domain."""

    inputs: np.ndarray   # (m, d)
    targets: np.ndarray  # (m,)
    source: str
    noise_sd: float
    seed: int
    domain: BoxDomain

    def __post_init__(self):
        self.inputs = np.asarray(self.inputs, dtype=float)
        self.targets = np.asarray(self.targets, dtype=float)
        if self.inputs.ndim != 2 or len(self.inputs) == 0:
            raise ValueError("dataset needs at least one row")
        if len(self.inputs) != len(self.targets):
            raise ValueError("inputs and targets length mismatch")

    def __len__(self):
        return len(self.inputs)

    @property
    def dim(self) -> int:
        return self.inputs.shape[1]

    def save(self, csv_path) -> None:
        """Write CSV (header x1,...,xd,target) plus a .meta.json sidecar."""
        csv_path = Path(csv_path)
        header = ",".join(f"x{j+1}" for j in range(self.dim)) + ",target"
        lines = [header]
        for x, t in zip(self.inputs, self.targets):
            lines.append(",".join(repr(float(v)) for v in x) + "," + repr(float(t)))
        csv_path.write_text("\n".join(lines) + "\n")
        meta = {
            "source": self.source,
            "noise_sd": self.noise_sd,
            "seed": self.seed,
            "domain": [list(b) for b in self.domain.bounds],
        }
        sidecar_path(csv_path).write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")

    @classmethod
    def load(cls, csv_path) -> "Dataset":
        csv_path = Path(csv_path)
        raw = np.loadtxt(csv_path, delimiter=",", skiprows=1, ndmin=2)
        meta = json.loads(sidecar_path(csv_path).read_text())
        return cls(
            inputs=raw[:, :-1],
            targets=raw[:, -1],
            source=meta["source"],
            noise_sd=meta["noise_sd"],
            seed=meta["seed"],
            domain=BoxDomain(tuple(tuple(b) for b in meta["domain"])),
        )


def sidecar_path(csv_path) -> Path:
    csv_path = Path(csv_path)
    return csv_path.with_suffix(".meta.json")


def sample_dataset(
    f: Objective,
    domain: BoxDomain,
    m: int,
    noise_sd: float = 0.1,
    seed: int = 0,
) -> Dataset:
    """Draw m uniform points from the domain and record noisy function values."""
    if m < 1:
        raise ValueError("need at least one sample")
    if noise_sd < 0:
        raise ValueError("noise_sd must be nonnegative")
    rng = np.random.default_rng(seed)
    X = domain.sample_uniform(rng, m)
    y = f.evaluate_many(X)
    if noise_sd > 0:
        y = y + rng.normal(0.0, noise_sd, size=m)
    return Dataset(
        inputs=X,
        targets=y,
        source=f.name or "objective",
        noise_sd=noise_sd,
        seed=seed,
        domain=domain,
    )

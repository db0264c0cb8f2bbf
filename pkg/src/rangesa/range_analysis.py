"""Range estimation: paired min/max annealing runs and the brute-force grid oracle."""
from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .anneal import AnnealConfig, run
from .domain import BoxDomain
from .objectives import Objective

GRID_BUDGET = 10**8


class GridBudgetExceeded(ValueError):
    """Raised when the requested tensor grid is larger than the evaluation budget."""


@dataclass
class RangeResult:
    """Inner interval of witnessed values: endpoints are actual evaluations."""

    f_min: float
    f_max: float
    x_min: np.ndarray
    x_max: np.ndarray
    eval_count: int
    seeds_used: list[int]
    interval_type: str = "inner"

    def __post_init__(self):
        if self.f_min > self.f_max:
            raise ValueError("f_min must not exceed f_max")

    def to_json_dict(self, config: AnnealConfig | None = None) -> dict:
        doc = {
            "f_min": self.f_min,
            "f_max": self.f_max,
            "x_min": list(map(float, self.x_min)),
            "x_max": list(map(float, self.x_max)),
            "interval_type": self.interval_type,
            "eval_count": self.eval_count,
            "seeds_used": self.seeds_used,
        }
        if config is not None:
            doc["config"] = {
                "t_max": config.t_max,
                "t_min": config.t_min,
                "delta": config.delta,
                "inner_iters": config.inner_iters,
                "proposal_variance": config.proposal_variance,
                "seed": config.seed,
                "mode": config.mode,
                "cooling": config.cooling,
            }
        return doc

    def save(self, path, config: AnnealConfig | None = None) -> None:
        Path(path).write_text(json.dumps(self.to_json_dict(config), indent=2, sort_keys=True) + "\n")


def estimate_range(
    f: Objective,
    domain: BoxDomain,
    cfg: AnnealConfig,
    n_seeds: int = 10,
    return_traces: bool = False,
):
    """Estimate [f_min, f_max] via n_seeds annealing runs on f and on -f.

    The negated runs reuse the same seeds, so estimate_range(-f) swaps and
    negates the interval exactly. Both argpoints are re-validated by a fresh
    evaluation of f.
    """
    if n_seeds < 1:
        raise ValueError("need at least one seed")
    seeds = [cfg.seed + k for k in range(n_seeds)]
    neg = f.negated()
    min_runs = [run(f, domain, replace(cfg, seed=s)) for s in seeds]
    max_runs = [run(neg, domain, replace(cfg, seed=s)) for s in seeds]

    best_min = min(min_runs, key=lambda r: r.best_value)
    best_max = min(max_runs, key=lambda r: r.best_value)
    x_min, x_max = best_min.best, best_max.best

    result = RangeResult(
        f_min=f(x_min),
        f_max=f(x_max),
        x_min=x_min,
        x_max=x_max,
        eval_count=sum(r.eval_count for r in min_runs + max_runs) + 2,
        seeds_used=seeds,
    )
    if return_traces:
        return result, {"min": min_runs, "max": max_runs}
    return result


@dataclass
class OracleResult:
    min_value: float
    min_point: np.ndarray
    max_value: float
    max_point: np.ndarray
    n_points: int

    def to_json_dict(self) -> dict:
        return {
            "min_value": self.min_value,
            "min_point": list(map(float, self.min_point)),
            "max_value": self.max_value,
            "max_point": list(map(float, self.max_point)),
            "n_points": self.n_points,
        }

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json_dict(), indent=2, sort_keys=True) + "\n")


def grid_oracle(
    f: Objective,
    domain: BoxDomain,
    points_per_dim: int,
    chunk: int = 1 << 16,
) -> OracleResult:
    """Exhaustive evaluation on the uniform tensor grid (endpoints included).

    Deterministic; ties resolve to the first grid point in row-major order.
    """
    if points_per_dim < 2:
        raise ValueError("points_per_dim must be at least 2")
    d = domain.dim
    n_total = points_per_dim**d
    if n_total > GRID_BUDGET:
        raise GridBudgetExceeded(
            f"grid of {n_total} points exceeds the {GRID_BUDGET} budget; "
            "reduce points_per_dim"
        )
    axes = [np.linspace(lo, hi, points_per_dim) for lo, hi in domain.bounds]

    min_value = np.inf
    max_value = -np.inf
    min_point = max_point = None
    for start in range(0, n_total, chunk):
        idx = np.arange(start, min(start + chunk, n_total))
        coords = np.empty((len(idx), d))
        rem = idx
        for j in range(d - 1, -1, -1):
            coords[:, j] = axes[j][rem % points_per_dim]
            rem = rem // points_per_dim
        vals = f.evaluate_many(coords)
        k = int(np.argmin(vals))
        if vals[k] < min_value:
            min_value, min_point = float(vals[k]), coords[k].copy()
        k = int(np.argmax(vals))
        if vals[k] > max_value:
            max_value, max_point = float(vals[k]), coords[k].copy()
    return OracleResult(
        min_value=min_value,
        min_point=min_point,
        max_value=max_value,
        max_point=max_point,
        n_points=n_total,
    )

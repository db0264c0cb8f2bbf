"""Hypercube search domains and the cyclic reflection map.

The reflection folds any real vector back into the box by mirroring at the
faces with period twice the side length per coordinate, so that Gaussian
proposals landing outside the box are exchanged for points inside it.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class BoxDomain:
    """Product of closed intervals ``[l_j, u_j]``, one per input dimension."""

    bounds: tuple[tuple[float, float], ...]

    def __post_init__(self):
        bounds = tuple((float(lo), float(hi)) for lo, hi in self.bounds)
        if len(bounds) == 0:
            raise ValueError("domain must have at least one dimension")
        for j, (lo, hi) in enumerate(bounds):
            if not (np.isfinite(lo) and np.isfinite(hi)):
                raise ValueError(f"dimension {j}: bounds must be finite, got [{lo}, {hi}]")
            if not lo < hi:
                raise ValueError(f"dimension {j}: need lower < upper, got [{lo}, {hi}]")
        object.__setattr__(self, "bounds", bounds)
        object.__setattr__(self, "_lower", np.array([b[0] for b in bounds]))
        object.__setattr__(self, "_upper", np.array([b[1] for b in bounds]))
        object.__setattr__(self, "_widths", self._upper - self._lower)

    @property
    def dim(self) -> int:
        return len(self.bounds)

    @property
    def lower(self) -> np.ndarray:
        return self._lower.copy()

    @property
    def upper(self) -> np.ndarray:
        return self._upper.copy()

    @property
    def widths(self) -> np.ndarray:
        return self._widths.copy()

    def _check_dim(self, p: np.ndarray) -> None:
        if p.shape[-1] != self.dim:
            raise ValueError(f"point has dimension {p.shape[-1]}, domain has {self.dim}")

    def contains(self, p) -> bool | np.ndarray:
        """Membership test; accepts a single point or an (..., d) batch."""
        p = np.asarray(p, dtype=float)
        self._check_dim(p)
        inside = np.all((p >= self._lower) & (p <= self._upper), axis=-1)
        return bool(inside) if inside.ndim == 0 else inside

    def reflect(self, y) -> np.ndarray:
        """Fold an arbitrary real vector into the box, component-wise.

        Points already inside are returned unchanged. The map is the
        period-2(u-l) triangle wave per coordinate: the fractional offset
        ``t = (y - l) mod 2(u - l)`` maps to ``l + t`` when ``t <= u - l``
        and to ``u - (t - (u - l))`` otherwise.
        """
        y = np.asarray(y, dtype=float)
        self._check_dim(y)
        w = self._widths
        t = np.mod(y - self._lower, 2.0 * w)
        folded = self._lower + np.where(t <= w, t, 2.0 * w - t)
        # rounding at the period seam must never produce a point outside the box
        return np.clip(folded, self._lower, self._upper)

    def sample_uniform(self, rng: np.random.Generator, n: int | None = None) -> np.ndarray:
        size = self.dim if n is None else (n, self.dim)
        return rng.uniform(self._lower, self._upper, size=size)

    @classmethod
    def cube(cls, lo: float, hi: float, dim: int) -> "BoxDomain":
        return cls(tuple((lo, hi) for _ in range(dim)))

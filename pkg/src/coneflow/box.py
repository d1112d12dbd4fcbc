"""Axis-aligned boxes used as state-space domains."""

from __future__ import annotations

from itertools import product

import numpy as np

from .errors import DimensionError


class Box:
    """The product of closed intervals ``[lo_i, hi_i]``."""

    def __init__(self, lo, hi):
        self.lo = np.asarray(lo, dtype=float)
        self.hi = np.asarray(hi, dtype=float)
        if self.lo.shape != self.hi.shape or self.lo.ndim != 1:
            raise DimensionError("lo and hi must be 1-D arrays of equal length")
        if np.any(self.hi < self.lo):
            raise DimensionError("box needs hi >= lo in every coordinate")
        self.lo.setflags(write=False)
        self.hi.setflags(write=False)

    @classmethod
    def symmetric(cls, half_widths) -> "Box":
        hw = np.asarray(half_widths, dtype=float)
        return cls(-hw, hw)

    @property
    def dim(self) -> int:
        return self.lo.shape[0]

    @property
    def center(self) -> np.ndarray:
        return 0.5 * (self.lo + self.hi)

    @property
    def widths(self) -> np.ndarray:
        return self.hi - self.lo

    def contains(self, x, pad: float = 0.0) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= self.lo - pad) and np.all(x <= self.hi + pad))

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        """Uniform samples, shape (count, dim)."""
        return rng.uniform(self.lo, self.hi, size=(count, self.dim))

    def grid(self, res: int) -> np.ndarray:
        """Regular grid with ``res`` points per axis, shape (res**dim, dim)."""
        if res < 1:
            raise ValueError("res must be >= 1")
        axes = [
            np.linspace(self.lo[i], self.hi[i], res) if res > 1
            else np.array([0.5 * (self.lo[i] + self.hi[i])])
            for i in range(self.dim)
        ]
        return np.array(list(product(*axes)), dtype=float)

    def project(self, indices) -> "Box":
        """Sub-box on a subset of coordinates."""
        idx = list(indices)
        return Box(self.lo[idx], self.hi[idx])

    def __repr__(self):
        pairs = ", ".join(
            f"[{lo:g}, {hi:g}]" for lo, hi in zip(self.lo, self.hi)
        )
        return f"Box({pairs})"

"""Shared solution record and complementarity-pattern helpers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def pattern_mask(free_x) -> int:
    """Encode a boolean vector (True where ``x_i`` is free and ``y_i = 0``) as a bitmask."""
    return int(sum(1 << i for i, f in enumerate(free_x) if f))


def pattern_bits(mask: int, n: int) -> np.ndarray:
    """Boolean vector of length ``n``: True where bit ``i`` of ``mask`` is set."""
    return np.array([(mask >> i) & 1 == 1 for i in range(n)], dtype=bool)


@dataclass(frozen=True)
class SolutionPair:
    """A candidate ``(x, y)`` with its residual diagnostics.

    ``pattern`` marks the coordinates where ``x`` carries the value (``y_i = 0``).
    """

    x: np.ndarray
    y: np.ndarray
    residual_complementarity: float
    residual_equation: float
    pattern: int

    @property
    def z(self) -> np.ndarray:
        return np.concatenate([self.x, self.y])

    def to_dict(self) -> dict:
        return {
            "x": [float(v) for v in self.x],
            "y": [float(v) for v in self.y],
            "residual_complementarity": float(self.residual_complementarity),
            "residual_equation": float(self.residual_equation),
            "pattern": int(self.pattern),
        }


def make_pair(x, y, eq_residual_vec) -> SolutionPair:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    comp = float(np.max(np.abs(np.minimum(x, y)), initial=0.0))
    eq = float(np.max(np.abs(eq_residual_vec), initial=0.0))
    return SolutionPair(x, y, comp, eq, pattern_mask(x > y))


def merge_pairs(pairs, tol):
    """Deduplicate within ``tol`` (max norm on ``(x, y)``), keeping the earliest of each cluster."""
    kept = []
    for p in pairs:
        if all(np.max(np.abs(p.z - k.z)) > tol for k in kept):
            kept.append(p)
    return kept


def canonical_order(pairs):
    """Sort by pattern, then lexicographically by ``x`` and ``y``."""
    return sorted(pairs, key=lambda p: (p.pattern, tuple(np.round(p.x, 12)), tuple(np.round(p.y, 12))))

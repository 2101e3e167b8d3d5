"""Exact horizontal LCP solver by complementary-pattern enumeration.

For a pattern ``alpha`` (coordinates where ``x`` is free and ``y`` vanishes),
``x ^ y = 0`` turns ``A x - B y = q`` into the square system
``M(alpha) w = q`` whose column ``i`` is ``A[:, i]`` for ``i`` in ``alpha`` and
``-B[:, i]`` otherwise, with ``w >= 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from .solution import SolutionPair, canonical_order, merge_pairs, pattern_bits

__all__ = ["HLCPResult", "pattern_matrix", "solve_hlcp_enumerate", "hlcp_is_unique", "MAX_HLCP_DIM"]

MAX_HLCP_DIM = 24
DEDUP_TOL = 1e-7


@dataclass
class HLCPResult:
    """Solutions of one HLCP plus the singular patterns whose solution set is a continuum."""

    solutions: list = field(default_factory=list)
    degenerate_patterns: list = field(default_factory=list)

    @property
    def unique(self) -> bool:
        return len(self.solutions) == 1 and not self.degenerate_patterns


def _check(A, B, q):
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    q = np.asarray(q, dtype=float)
    n = q.shape[0]
    if A.shape != (n, n) or B.shape != (n, n):
        raise ValueError(f"HLCP needs n x n matrices and a length-n vector, got {A.shape}, {B.shape}, {q.shape}")
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(B)) and np.all(np.isfinite(q))):
        raise ValueError("HLCP data must be finite")
    if n > MAX_HLCP_DIM:
        raise ValueError(f"enumeration guard: n = {n} > {MAX_HLCP_DIM}")
    return A, B, q


def pattern_matrix(A, B, mask: int) -> np.ndarray:
    n = A.shape[0]
    bits = pattern_bits(mask, n)
    return np.where(bits[None, :], A, -B)


def _single_point(M, q, tol):
    """For singular ``M``: the polyhedron ``{w >= 0, M w = q}`` as (point | None, is_continuum)."""
    n = M.shape[1]
    feas = linprog(np.zeros(n), A_eq=M, b_eq=q, bounds=[(0, None)] * n, method="highs")
    if feas.status != 0:
        return None, False
    lo = np.empty(n)
    hi = np.empty(n)
    for i in range(n):
        c = np.zeros(n)
        c[i] = 1.0
        r_min = linprog(c, A_eq=M, b_eq=q, bounds=[(0, None)] * n, method="highs")
        r_max = linprog(-c, A_eq=M, b_eq=q, bounds=[(0, None)] * n, method="highs")
        if r_min.status != 0 or r_max.status != 0:
            return None, True  # unbounded along w_i
        lo[i], hi[i] = r_min.x[i], r_max.x[i]
    if np.max(hi - lo) > tol:
        return None, True
    return 0.5 * (lo + hi), False


def _pair_from_w(A, B, q, w, mask):
    n = q.shape[0]
    bits = pattern_bits(mask, n)
    x = np.where(bits, w, 0.0)
    y = np.where(bits, 0.0, w)
    eq = A @ x - B @ y - q
    return SolutionPair(
        x, y,
        float(np.max(np.abs(np.minimum(x, y)), initial=0.0)),
        float(np.max(np.abs(eq), initial=0.0)),
        mask,
    )


def solve_hlcp_enumerate(A, B, q, tol: float = 1e-9) -> HLCPResult:
    """Every solution of ``x ^ y = 0, A x - B y = q`` over all ``2^n`` patterns.

    Nonsingular patterns are solved directly; components down to ``-tol`` are
    clamped to zero. Singular patterns are settled by linear programming on
    ``{w >= 0 : M w = q}``: an empty set contributes nothing, a single point
    is kept as a solution, and a continuum is listed in
    ``degenerate_patterns``.
    Solutions within ``1e-7`` are merged and the output is sorted by pattern.
    """
    A, B, q = _check(A, B, q)
    n = q.shape[0]
    found = []
    degenerate = []
    for mask in range(1 << n):
        M = pattern_matrix(A, B, mask)
        s = np.linalg.svd(M, compute_uv=False)
        if n == 0 or s[-1] > 1e-12 * max(1.0, s[0]):
            w = np.linalg.solve(M, q)
        else:
            w, continuum = _single_point(M, q, tol)
            if continuum:
                degenerate.append(mask)
            if w is None:
                continue
        if np.min(w, initial=0.0) < -tol:
            continue
        w = np.maximum(w, 0.0)
        pair = _pair_from_w(A, B, q, w, mask)
        if pair.residual_equation <= tol:
            found.append(pair)
    sols = canonical_order(merge_pairs(sorted(found, key=lambda p: p.pattern), DEDUP_TOL))
    return HLCPResult(sols, degenerate)


def hlcp_is_unique(A, B, q, tol: float = 1e-9):
    """``(True, [solution])`` when the HLCP has exactly one solution and no degenerate pattern.

    Otherwise ``(False, solutions)``.
    """
    res = solve_hlcp_enumerate(A, B, q, tol)
    return res.unique, res.solutions

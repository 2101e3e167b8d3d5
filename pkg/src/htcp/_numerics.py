"""Batched kernels shared by the solvers, classifiers and spectra.

Everything here works on stacks of points ``(S, k)`` so that multistart runs
are vectorized. Per-row results never depend on the other rows of a batch,
and callers chunk work in fixed-size blocks so results are reproducible
regardless of how many workers execute those blocks.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

CHUNK = 32
_COND_LIMIT = 1e12


def power_batch(T: np.ndarray, X: np.ndarray) -> np.ndarray:
    """Rows of ``X`` mapped through ``x -> T x^{m-1}``; ``T`` is a raw array."""
    m, n = T.ndim, T.shape[0]
    S = X.shape[0]
    R = X @ T.reshape(-1, n).T
    for _ in range(m - 2):
        R = np.matmul(R.reshape(S, -1, n), X[:, :, None])[..., 0]
    return R


def jacobian_batch(Tsym: np.ndarray, X: np.ndarray) -> np.ndarray:
    """Jacobians ``(m-1) Tbar x^{m-2}`` for rows of ``X``; ``Tsym`` must be partially symmetric."""
    m, n = Tsym.ndim, Tsym.shape[0]
    S = X.shape[0]
    if m == 2:
        return np.broadcast_to(Tsym, (S, n, n)).copy()
    R = X @ Tsym.reshape(-1, n).T
    for _ in range(m - 3):
        R = np.matmul(R.reshape(S, -1, n), X[:, :, None])[..., 0]
    return (m - 1) * R.reshape(S, n, n)


def frobenius(T: np.ndarray) -> float:
    return float(np.sqrt(np.sum(T * T)))


def resolve_workers(workers=None) -> int:
    if workers is None:
        workers = int(os.environ.get("HTCP_WORKERS", "1") or 1)
    return max(1, int(workers))


def run_chunks(func, items, workers=1):
    """Map ``func`` over ``items`` preserving order; threads only change scheduling."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [func(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(func, items))


def chunked(n_rows: int, size: int = CHUNK):
    return [(i, min(i + size, n_rows)) for i in range(0, n_rows, size)]


def _sd_directions(J: np.ndarray, F: np.ndarray):
    """Steepest-descent steps scaled by the exact minimizer along ``-J^T F`` of the linear model."""
    g = np.einsum("sji,sj->si", J, F)
    Jg = np.einsum("sij,sj->si", J, g)
    num = np.sum(g * g, axis=1)
    den = np.sum(Jg * Jg, axis=1)
    alpha = np.where(den > 0, num / np.where(den > 0, den, 1.0), 0.0)
    return -alpha[:, None] * g


def _lm_directions(J: np.ndarray, F: np.ndarray):
    """Levenberg-Marquardt directions ``-(J^T J + mu I)^{-1} J^T F`` with ``mu = |F|_2``.

    ``J`` may be rectangular (more residuals than unknowns).
    """
    S, _, k = J.shape
    mu = np.linalg.norm(F, axis=1)
    H = np.einsum("sji,sjk->sik", J, J) + mu[:, None, None] * np.eye(k)[None]
    g = np.einsum("sji,sj->si", J, F)
    with np.errstate(all="ignore"):
        cond = np.linalg.cond(H)
    good = np.isfinite(cond) & (cond < _COND_LIMIT)
    D = np.zeros((S, k))
    if good.any():
        D[good] = -np.linalg.solve(H[good], g[good][..., None])[..., 0]
    if (~good).any():
        D[~good] = _sd_directions(J[~good], F[~good])
    return D


def _directions(J: np.ndarray, F: np.ndarray):
    """Newton directions, with a scaled steepest-descent step where ``J`` is near singular."""
    S, k, _ = J.shape
    D = np.zeros((S, k))
    with np.errstate(all="ignore"):
        cond = np.linalg.cond(J)
    good = np.isfinite(cond) & (cond < _COND_LIMIT)
    if good.any():
        D[good] = np.linalg.solve(J[good], -F[good][..., None])[..., 0]
    bad = ~good
    if bad.any():
        D[bad] = _sd_directions(J[bad], F[bad])
    return D


@dataclass
class NewtonResult:
    z: np.ndarray
    f: np.ndarray
    converged: np.ndarray
    iterations: np.ndarray


def damped_newton(
    fun, jac, Z0, *, tol, max_iter=100, max_halvings=30, regularize=False, project=None
) -> NewtonResult:
    """Vectorized damped (semismooth) Newton with Armijo backtracking on ``0.5 |F|^2``.

    With ``regularize`` the direction is Levenberg-Marquardt with ``mu = |F|``,
    which keeps fast local convergence but avoids full steps onto points where
    the Jacobian of a power map degenerates; it also accepts rectangular
    (overdetermined) systems. ``project`` maps trial points back onto a
    feasible set (e.g. a nonnegativity clamp); steps are then accepted on
    plain merit decrease.

    A row stops when ``max|F| <= tol``, when the iteration budget runs out, or
    when ``max_halvings`` step halvings fail to decrease the merit (a failed
    start).
    """
    Z = np.array(Z0, dtype=float, copy=True)
    S = Z.shape[0]
    F = fun(Z)
    merit = 0.5 * np.sum(F * F, axis=1)
    done = np.max(np.abs(F), axis=1, initial=0.0) <= tol
    stuck = np.zeros(S, dtype=bool)
    iters = np.zeros(S, dtype=int)
    for _ in range(max_iter):
        idx = np.flatnonzero(~(done | stuck))
        if len(idx) == 0:
            break
        Za, Fa, ma = Z[idx], F[idx], merit[idx]
        J = jac(Za)
        D = _lm_directions(J, Fa) if regularize else _directions(J, Fa)
        slope = np.sum(Fa * np.einsum("sij,sj->si", J, D), axis=1)
        step = np.ones(len(idx))
        pending = np.ones(len(idx), dtype=bool)
        for _h in range(max_halvings + 1):
            p = np.flatnonzero(pending)
            if len(p) == 0:
                break
            Zt = Za[p] + step[p, None] * D[p]
            if project is not None:
                Zt = project(Zt)
            Ft = fun(Zt)
            mt = 0.5 * np.sum(Ft * Ft, axis=1)
            if project is None:
                ok = mt <= ma[p] + 1e-4 * step[p] * slope[p]
            else:
                ok = mt < ma[p]
            ok |= np.max(np.abs(Ft), axis=1) <= tol
            ok &= np.all(np.isfinite(Ft), axis=1)
            acc = p[ok]
            Z[idx[acc]] = Zt[ok]
            F[idx[acc]] = Ft[ok]
            merit[idx[acc]] = mt[ok]
            pending[acc] = False
            step[p[~ok]] *= 0.5
        stuck[idx[pending]] = True
        iters[idx] += 1
        done = np.max(np.abs(F), axis=1, initial=0.0) <= tol
    return NewtonResult(Z, F, done, iters)


def dedup_rows(P: np.ndarray, tol: float) -> np.ndarray:
    """Indices of representatives after merging rows within ``tol`` in the max norm (first wins)."""
    keep = []
    for i in range(P.shape[0]):
        if all(np.max(np.abs(P[i] - P[j])) > tol for j in keep):
            keep.append(i)
    return np.array(keep, dtype=int)


@dataclass
class Exclusion:
    """Outcome of a cell-exclusion sweep over a box."""

    survivors_lo: np.ndarray
    survivors_hi: np.ndarray
    complete: bool
    evaluated: int
    best_center: np.ndarray | None
    best_value: float


def exclude_cells(value, lo, hi, lipschitz, *, init_step, min_width, max_evals=2_000_000):
    """Adaptive subdivision that discards cells where ``value`` cannot reach zero.

    ``value(centers)`` returns a nonnegative residual per cell centre and
    ``lipschitz(lo, hi)`` a bound on its Lipschitz constant over each cell. A
    cell is discarded when ``value(c) > L * halfdiag``; the rest are halved in
    every direction until narrower than ``min_width``. Cells still alive at
    that width are returned as survivors. ``complete`` is False when the
    evaluation budget ran out first.
    """
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    k = lo.shape[0]
    counts = np.maximum(1, np.ceil((hi - lo) / init_step).astype(int))
    grids = [np.linspace(lo[d], hi[d], counts[d] + 1) for d in range(k)]
    mesh_lo = np.stack(np.meshgrid(*[g[:-1] for g in grids], indexing="ij"), -1).reshape(-1, k)
    mesh_hi = np.stack(np.meshgrid(*[g[1:] for g in grids], indexing="ij"), -1).reshape(-1, k)
    cur_lo, cur_hi = mesh_lo, mesh_hi
    fin_lo, fin_hi = [], []
    evaluated = 0
    best_c, best_v = None, np.inf
    offsets = np.stack(np.meshgrid(*[[0, 1]] * k, indexing="ij"), -1).reshape(-1, k)
    while len(cur_lo):
        if evaluated + len(cur_lo) > max_evals:
            return Exclusion(
                np.vstack(fin_lo + [cur_lo]), np.vstack(fin_hi + [cur_hi]), False, evaluated, best_c, best_v
            )
        centers = 0.5 * (cur_lo + cur_hi)
        vals = value(centers)
        evaluated += len(centers)
        j = int(np.argmin(vals))
        if vals[j] < best_v:
            best_v, best_c = float(vals[j]), centers[j].copy()
        half = 0.5 * np.linalg.norm(cur_hi - cur_lo, axis=1)
        lip = lipschitz(cur_lo, cur_hi)
        alive = vals <= lip * half * (1.0 + 1e-9) + 1e-12 * np.maximum(1.0, lip)
        cur_lo, cur_hi = cur_lo[alive], cur_hi[alive]
        width = np.max(cur_hi - cur_lo, axis=1) if len(cur_lo) else np.zeros(0)
        small = width < min_width
        fin_lo.append(cur_lo[small])
        fin_hi.append(cur_hi[small])
        cur_lo, cur_hi = cur_lo[~small], cur_hi[~small]
        if len(cur_lo):
            mid = 0.5 * (cur_lo + cur_hi)
            span = 0.5 * (cur_hi - cur_lo)
            new_lo = np.where(offsets[None, :, :] == 0, cur_lo[:, None, :], mid[:, None, :])
            cur_lo = new_lo.reshape(-1, k)
            cur_hi = (new_lo + span[:, None, :]).reshape(-1, k)
    s_lo = np.vstack(fin_lo) if fin_lo else np.zeros((0, k))
    s_hi = np.vstack(fin_hi) if fin_hi else np.zeros((0, k))
    return Exclusion(s_lo, s_hi, True, evaluated, best_c, best_v)


def box_roots(fun, jac, lo, hi, lipschitz, *, tol, init_step, min_width, max_evals=2_000_000, max_iter=60):
    """All roots of a square system inside a box, by cell exclusion then Newton polish.

    Returns ``(roots, complete)``; ``complete`` is False when exclusion ran out
    of budget, in which case the list may miss roots.
    """
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    k = lo.shape[0]
    if k == 0:
        return np.zeros((0, 0)), True

    ex = exclude_cells(
        lambda C: np.linalg.norm(fun(C), axis=1), lo, hi, lipschitz,
        init_step=init_step, min_width=min_width, max_evals=max_evals,
    )
    if len(ex.survivors_lo) == 0:
        return np.zeros((0, k)), ex.complete
    starts = 0.5 * (ex.survivors_lo + ex.survivors_hi)
    res = damped_newton(fun, jac, starts, tol=tol, max_iter=max_iter)
    span = np.maximum(hi - lo, 1.0)
    inside = np.all((res.z >= lo - 1e-9 * span) & (res.z <= hi + 1e-9 * span), axis=1)
    roots = res.z[res.converged & inside]
    if len(roots) == 0:
        return roots, ex.complete
    order = np.lexsort(roots.T[::-1])
    roots = roots[order]
    return roots[dedup_rows(roots, 1e-7 * max(1.0, float(np.max(np.abs(roots)))))], ex.complete

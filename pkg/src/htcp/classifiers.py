"""Certify or refute structural properties of tensor pairs.

Each check returns a three-valued :class:`Verdict`. A refutation always
carries a witness that re-verifies from scratch. "Holds" is emitted only for
finitely checkable cases: parity gates, exact matrix tests at ``m = 2`` and
Lipschitz grid exhaustion on the unit sphere for ``n <= 2``. Everything else
that survives the search budget is reported as inconclusive.

Homogeneous searches normalize ``|(x, y)|_2 = 1`` and solve the resulting
overdetermined systems with a batched projected Levenberg-Marquardt iteration.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from ._numerics import damped_newton, exclude_cells, frobenius, jacobian_batch, power_batch
from .hlcp import hlcp_is_unique, pattern_matrix
from .solution import pattern_bits
from .solver import GuardExceeded, HTCPInstance, SolverConfig, Status, solve_pattern_enumeration
from .tensor import (
    Tensor,
    apply_power,
    as_tensor,
    identity_tensor,
    inverse_power_vector,
    jacobian,
    partial_symmetrize,
    shao_product,
)

__all__ = [
    "Outcome",
    "Verdict",
    "NotApplicable",
    "check_r0_pair",
    "check_p_pair",
    "check_det_condition",
    "left_inverse_order2",
    "check_p_tensor",
    "check_p_pair_via_left_inverse",
    "check_r_pair",
    "check_strong_p_pair",
    "permutation_conjugate",
    "det_tensor",
    "tensor_singular_direction",
    "det_witness_from_pair",
    "pair_from_det_witness",
    "verify_r0_witness",
    "verify_p_witness",
    "verify_p_tensor_witness",
    "verify_singular_witness",
    "verify_strong_p_witness",
    "verify_certificate",
]

GRID_STEP = 0.02
GRID_MIN_WIDTH = 1e-3
GRID_MAX_EVALS = 4_000_000
POLISH_SURVIVORS = 256


class Outcome(str, enum.Enum):
    REFUTED = "refuted-with-certificate"
    HOLDS = "holds-with-certificate"
    INCONCLUSIVE = "inconclusive-no-counterexample"


class NotApplicable(ValueError):
    """The requested reduction does not apply to this input."""


@dataclass
class Verdict:
    property: str
    outcome: Outcome
    certificate: dict | None = None
    effort: dict = field(default_factory=dict)
    seed: int = 0

    @property
    def refuted(self) -> bool:
        return self.outcome is Outcome.REFUTED

    @property
    def holds(self) -> bool:
        return self.outcome is Outcome.HOLDS

    def to_dict(self) -> dict:
        return {
            "property": self.property,
            "outcome": self.outcome.value,
            "certificate": _plain(self.certificate),
            "effort": _plain(self.effort),
            "seed": int(self.seed),
        }


def _plain(obj):
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


# --- witness verification ----------------------------------------------------


def _vec(v):
    return [float(t) for t in np.asarray(v, dtype=float).ravel()]


def verify_r0_witness(A, B, x, y, tol=1e-9) -> bool:
    """``(x, y) != 0`` normalized, with ``x ^ y = 0`` and ``A x^{m-1} = B y^{m-1}``."""
    x, y = np.asarray(x, float), np.asarray(y, float)
    norm = np.linalg.norm(np.concatenate([x, y]))
    comp = np.max(np.abs(np.minimum(x, y)))
    eq = np.max(np.abs(apply_power(A, x) - apply_power(B, y)))
    return bool(norm >= 0.5 and comp <= tol and eq <= tol)


def verify_p_witness(A, B, x, y, tol=1e-9) -> bool:
    """``(x, y) != 0`` normalized, with ``x * y <= tol`` and ``A x^{m-1} = B y^{m-1}``."""
    x, y = np.asarray(x, float), np.asarray(y, float)
    norm = np.linalg.norm(np.concatenate([x, y]))
    eq = np.max(np.abs(apply_power(A, x) - apply_power(B, y)))
    return bool(norm >= 0.5 and np.max(x * y) <= tol and eq <= tol)


def verify_p_tensor_witness(T, x, tol=1e-9) -> bool:
    x = np.asarray(x, float)
    return bool(np.linalg.norm(x) >= 0.5 and np.max(x * apply_power(T, x)) <= tol)


def verify_singular_witness(C, u, tol=1e-9) -> bool:
    u = np.asarray(u, float)
    return bool(np.linalg.norm(u) >= 0.5 and np.max(np.abs(apply_power(C, u))) <= tol)


def verify_strong_p_witness(A, B, x1, y1, x2, y2, tol=1e-9) -> bool:
    x1, y1, x2, y2 = (np.asarray(v, float) for v in (x1, y1, x2, y2))
    dx, dy = x1 - x2, y1 - y2
    norm = np.linalg.norm(np.concatenate([dx, dy]))
    eq = (apply_power(A, x1) - apply_power(A, x2)) - (apply_power(B, y1) - apply_power(B, y2))
    return bool(norm >= 0.5 and np.max(dx * dy) <= tol and np.max(np.abs(eq)) <= tol)


def verify_certificate(A, B, verdict: Verdict, tol=1e-9, q=None) -> bool:
    """Recheck a refutation certificate of any classifier from its raw vectors."""
    if not verdict.refuted:
        return True
    c = verdict.certificate
    kind = c.get("kind")
    arr = lambda key: np.asarray(c[key], dtype=float)
    if kind == "r0":
        return verify_r0_witness(A, B, arr("x"), arr("y"), tol)
    if kind == "p":
        return verify_p_witness(A, B, arr("x"), arr("y"), tol)
    if kind == "p-tensor":
        return verify_p_tensor_witness(A, arr("x"), tol)
    if kind == "p-leftinv":
        MB = shao_product(Tensor(arr("M")), B)
        return verify_p_tensor_witness(MB, arr("tensor_witness"), tol)
    if kind == "det":
        C = det_tensor(A, B, np.diag(arr("d1")), np.diag(arr("d2")))
        return verify_singular_witness(C, arr("u"), tol) and verify_p_witness(A, B, arr("x"), arr("y"), tol)
    if kind == "strong-p":
        return verify_strong_p_witness(A, B, arr("x1"), arr("y1"), arr("x2"), arr("y2"), tol)
    if kind == "r-clause":
        return _verify_r_clause(A, B, q, c, tol)
    return False


# --- shared search machinery -------------------------------------------------


def _guard(A, B, cfg):
    if A.order != B.order or A.dim != B.dim:
        raise ValueError("A and B must have the same order and dimension")
    if A.dim > cfg.max_enum_dim or A.order > cfg.max_order:
        raise GuardExceeded(
            f"classifier guard: n={A.dim} (max {cfg.max_enum_dim}), m={A.order} (max {cfg.max_order})"
        )


def _unit_rows(M):
    return M / np.maximum(np.linalg.norm(M, axis=1, keepdims=True), 1e-300)


def _nonneg(Z):
    return np.maximum(Z, 0.0)


def _search(fun, jac, Z0, cfg, project=None):
    """Run the batched LM solve; returns the final points and residuals."""
    res = damped_newton(
        fun, jac, Z0, tol=1e-3 * cfg.tol_residual, max_iter=cfg.max_newton_iters,
        regularize=True, project=project,
    )
    return res.z, res.f, int(res.iterations.sum())


class _Pair:
    def __init__(self, A: Tensor, B: Tensor):
        self.A, self.B = A, B
        self.m, self.n = A.order, A.dim
        self.Ad, self.Bd = A.data, B.data
        self.As, self.Bs = partial_symmetrize(A).data, partial_symmetrize(B).data
        self.lip = (self.m - 1) * (frobenius(self.Ad) + frobenius(self.Bd))


def _sphere_rows(W):
    return (np.sum(W * W, axis=1) - 1.0)[:, None]


# --- R0 ----------------------------------------------------------------------


def _r0_system(pp: _Pair, mask):
    bits = pattern_bits(mask, pp.n)

    def split(W):
        return np.where(bits, W, 0.0), np.where(bits, 0.0, W)

    def fun(W):
        X, Y = split(W)
        return np.hstack([power_batch(pp.Ad, X) - power_batch(pp.Bd, Y), _sphere_rows(W)])

    def jac(W):
        X, Y = split(W)
        J = np.where(bits[None, None, :], jacobian_batch(pp.As, X), -jacobian_batch(pp.Bs, Y))
        return np.concatenate([J, 2 * W[:, None, :]], axis=1)

    return split, fun, jac


def _r0_witness(pp, mask, w, tol):
    w = np.maximum(w, 0.0)
    if not np.linalg.norm(w) > 0:
        return None
    w = w / np.linalg.norm(w)
    bits = pattern_bits(mask, pp.n)
    x, y = np.where(bits, w, 0.0), np.where(bits, 0.0, w)
    if verify_r0_witness(pp.A, pp.B, x, y, tol):
        eq = np.max(np.abs(apply_power(pp.A, x) - apply_power(pp.B, y)))
        return {"kind": "r0", "x": _vec(x), "y": _vec(y), "pattern": int(mask), "residual_equation": float(eq)}
    return None


def _r0_m2_exact(pp, tol):
    """LP per pattern: max sum(w) with M w = 0, 0 <= w <= 1; positive optimum gives a witness."""
    A, B = pp.Ad, pp.Bd
    for mask in range(1 << pp.n):
        M = pattern_matrix(A, B, mask)
        res = linprog(-np.ones(pp.n), A_eq=M, b_eq=np.zeros(pp.n), bounds=[(0, 1)] * pp.n, method="highs")
        if res.status == 0 and -res.fun > 1e-9:
            w = res.x
            # Snap onto the kernel to shed LP roundoff.
            _, s, Vt = np.linalg.svd(M)
            null = Vt[np.sum(s > 1e-10 * max(1.0, s[0])):]
            if len(null):
                w = null.T @ (null @ w)
            cert = _r0_witness(pp, mask, w, tol)
            if cert is not None:
                return cert, 1 << pp.n
    return None, 1 << pp.n


def _grid_certificate(value, lo, hi, lip, to_candidates, polish, tol):
    """Exclusion over an angle box; returns ("holds" | "refuted" | "inconclusive", cert, evals)."""
    ex = exclude_cells(
        value, lo, hi, lambda a, b: lip,
        init_step=GRID_STEP, min_width=GRID_MIN_WIDTH, max_evals=GRID_MAX_EVALS,
    )
    if ex.complete and len(ex.survivors_lo) == 0:
        return "holds", None, ex.evaluated
    centers = 0.5 * (ex.survivors_lo + ex.survivors_hi)
    if len(centers):
        vals = value(centers)
        centers = centers[np.argsort(vals, kind="stable")[:POLISH_SURVIVORS]]
        cert = polish(to_candidates(centers))
        if cert is not None:
            return "refuted", cert, ex.evaluated
    return "inconclusive", None, ex.evaluated


def _arc(phi):
    return np.stack([np.cos(phi[:, 0]), np.sin(phi[:, 0])], axis=1)


def check_r0_pair(A, B, cfg: SolverConfig | None = None) -> Verdict:
    """Search for ``(x, y) != 0`` with ``x ^ y = 0`` and ``A x^{m-1} = B y^{m-1}``.

    Every pattern's homogeneous system is searched on the unit sphere from
    ``cfg.multistart_count`` starts. ``m = 2`` is decided exactly by linear
    programming; ``n <= 2`` by Lipschitz grid exhaustion of the pattern arcs.
    """
    cfg = cfg or SolverConfig()
    A, B = as_tensor(A), as_tensor(B)
    _guard(A, B, cfg)
    pp = _Pair(A, B)
    n, tol = pp.n, cfg.tol_residual
    effort = {"patterns": 1 << n, "starts": 0, "iterations": 0}

    if pp.m == 2:
        cert, lps = _r0_m2_exact(pp, tol)
        effort["lp_patterns"] = lps
        if cert is not None:
            return Verdict("r0", Outcome.REFUTED, cert, effort, cfg.rng_seed)
        return Verdict("r0", Outcome.HOLDS, {"kind": "m2-lp", "patterns": 1 << n}, effort, cfg.rng_seed)

    for mask in range(1 << n):
        split, fun, jac = _r0_system(pp, mask)
        rng = np.random.default_rng([cfg.rng_seed, 1, mask])
        W0 = np.vstack([np.full((1, n), 1 / np.sqrt(n)), np.eye(n), _unit_rows(np.abs(rng.normal(size=(cfg.multistart_count, n))))])
        W, F, it = _search(fun, jac, W0, cfg, project=_nonneg)
        effort["starts"] += len(W0)
        effort["iterations"] += it
        for w in W:
            cert = _r0_witness(pp, mask, w, tol)
            if cert is not None:
                return Verdict("r0", Outcome.REFUTED, cert, effort, cfg.rng_seed)

    if n == 1:
        a, b = float(A.data.ravel()[0]), float(B.data.ravel()[0])
        effort["exact"] = True
        if a != 0.0 and b != 0.0:
            return Verdict("r0", Outcome.HOLDS, {"kind": "n1-exact", "a": a, "b": b}, effort, cfg.rng_seed)
        return Verdict("r0", Outcome.INCONCLUSIVE, None, effort, cfg.rng_seed)
    if n == 2:
        evals = 0
        for mask in range(4):
            split, fun, jac = _r0_system(pp, mask)
            value = lambda P: np.linalg.norm(fun(_arc(P))[:, :n], axis=1)

            def polish(W, mask=mask, fun=fun, jac=jac):
                Wp, _, _ = _search(fun, jac, W, cfg, project=_nonneg)
                for w in Wp:
                    cert = _r0_witness(pp, mask, w, tol)
                    if cert is not None:
                        return cert
                return None

            state, cert, ev = _grid_certificate(value, [0.0], [np.pi / 2], pp.lip, _arc, polish, tol)
            evals += ev
            if state == "refuted":
                effort["grid_cells"] = evals
                return Verdict("r0", Outcome.REFUTED, cert, effort, cfg.rng_seed)
            if state == "inconclusive":
                effort["grid_cells"] = evals
                return Verdict("r0", Outcome.INCONCLUSIVE, None, effort, cfg.rng_seed)
        effort["grid_cells"] = evals
        return Verdict(
            "r0", Outcome.HOLDS,
            {"kind": "grid", "step": GRID_STEP, "lipschitz": pp.lip, "cells": evals},
            effort, cfg.rng_seed,
        )
    return Verdict("r0", Outcome.INCONCLUSIVE, None, effort, cfg.rng_seed)


# --- P pair ------------------------------------------------------------------


def _orthants(n):
    """Sign vectors with first entry +1 (the zero set is symmetric under a global sign flip)."""
    for tail in itertools.product((1.0, -1.0), repeat=n - 1):
        yield np.array((1.0,) + tail)


def _p_system(pp: _Pair, s):
    n = pp.n

    def xy(V):
        return s * V[:, :n], -s * V[:, n:]

    def fun(V):
        X, Y = xy(V)
        return np.hstack([power_batch(pp.Ad, X) - power_batch(pp.Bd, Y), _sphere_rows(V)])

    def jac(V):
        X, Y = xy(V)
        J = np.concatenate([jacobian_batch(pp.As, X) * s, jacobian_batch(pp.Bs, Y) * s], axis=2)
        return np.concatenate([J, 2 * V[:, None, :]], axis=1)

    return xy, fun, jac


def _p_witness(pp, s, v, tol):
    n = pp.n
    v = np.maximum(v, 0.0)
    nv = np.linalg.norm(v)
    if not nv > 0:
        return None
    v = v / nv
    x, y = s * v[:n], -s * v[n:]
    if verify_p_witness(pp.A, pp.B, x, y, tol):
        eq = np.max(np.abs(apply_power(pp.A, x) - apply_power(pp.B, y)))
        return {"kind": "p", "x": _vec(x), "y": _vec(y), "signs": _vec(s), "residual_equation": float(eq)}
    return None


def _p_search(pp, cfg, effort, salt=2):
    n = pp.n
    for k, s in enumerate(_orthants(n)):
        xy, fun, jac = _p_system(pp, s)
        rng = np.random.default_rng([cfg.rng_seed, salt, k])
        V0 = _unit_rows(np.abs(rng.normal(size=(cfg.multistart_count, 2 * n))))
        V, F, it = _search(fun, jac, V0, cfg, project=_nonneg)
        effort["starts"] = effort.get("starts", 0) + len(V0)
        effort["iterations"] = effort.get("iterations", 0) + it
        order = np.argsort(np.max(np.abs(F), axis=1), kind="stable")
        for i in order:
            cert = _p_witness(pp, s, V[i], cfg.tol_residual)
            if cert is not None:
                return cert
    return None


def _p_m2_exact(pp, tol):
    """Matrix pairs: P iff all column representatives of ``(A, B)`` share one strict determinant sign."""
    A, B, n = pp.Ad, pp.Bd, pp.n
    dets = {}
    for mask in range(1 << n):
        dets[mask] = np.linalg.det(np.where(pattern_bits(mask, n)[None, :], B, A))
    scale = max(1.0, max(abs(d) for d in dets.values()))
    signs = {k: (0 if abs(d) <= 1e-12 * scale else int(np.sign(d))) for k, d in dets.items()}
    if len(set(signs.values())) == 1 and 0 not in signs.values():
        return "holds", {"kind": "m2-representatives", "sign": int(signs[0]), "count": 1 << n}
    for mask in range(1 << n):
        for i in range(n):
            other = mask ^ (1 << i)
            if other < mask:
                continue
            d0, d1 = dets[mask], dets[other]
            if signs[mask] * signs[other] > 0:
                continue
            # Column i moves from the mask's choice to the other along a segment; det is affine there.
            t = 0.0 if signs[mask] == 0 else (1.0 if signs[other] == 0 else d0 / (d0 - d1))
            bits = pattern_bits(mask, n)
            w_b = bits.astype(float)
            w_b[i] = (1 - t) * w_b[i] + t * (1 - w_b[i])
            d1v, d2v = 1.0 - w_b, w_b
            C = A * d1v[None, :] + B * d2v[None, :]
            _, _, Vt = np.linalg.svd(C)
            u = Vt[-1]
            x, y = d1v * u, -d2v * u
            nz = np.linalg.norm(np.concatenate([x, y]))
            x, y = x / nz, y / nz
            if verify_p_witness(pp.A, pp.B, x, y, tol):
                eq = np.max(np.abs(A @ x - B @ y))
                return "refuted", {"kind": "p", "x": _vec(x), "y": _vec(y), "residual_equation": float(eq)}
    return "inconclusive", None


def _p_angles_to_v(P, n):
    if n == 1:
        return np.stack([np.cos(P[:, 0]), np.sin(P[:, 0])], axis=1)
    c, s = np.cos(P[:, 0]), np.sin(P[:, 0])
    r = np.stack([c * np.cos(P[:, 1]), s * np.cos(P[:, 2])], axis=1)
    t = np.stack([c * np.sin(P[:, 1]), s * np.sin(P[:, 2])], axis=1)
    return np.hstack([r, t])


def _p_grid(pp, cfg, effort):
    n = pp.n
    k = 1 if n == 1 else 3
    evals = 0
    for s in _orthants(n):
        xy, fun, jac = _p_system(pp, s)
        value = lambda P: np.linalg.norm(fun(_p_angles_to_v(P, n))[:, :n], axis=1)

        def polish(V, s=s, fun=fun, jac=jac):
            Vp, _, _ = _search(fun, jac, V, cfg, project=_nonneg)
            for v in Vp:
                cert = _p_witness(pp, s, v, cfg.tol_residual)
                if cert is not None:
                    return cert
            return None

        state, cert, ev = _grid_certificate(
            value, [0.0] * k, [np.pi / 2] * k, pp.lip, lambda P: _p_angles_to_v(P, n), polish, cfg.tol_residual
        )
        evals += ev
        if state != "holds":
            effort["grid_cells"] = evals
            return state, cert
    effort["grid_cells"] = evals
    return "holds", {"kind": "grid", "step": GRID_STEP, "lipschitz": pp.lip, "cells": evals}


def check_p_pair(A, B, cfg: SolverConfig | None = None) -> Verdict:
    """Search for ``(x, y) != 0`` with ``x * y <= 0`` and ``A x^{m-1} = B y^{m-1}``.

    Writing ``x = s * r`` and ``y = -s * t`` with ``r, t >= 0`` for each sign
    vector ``s`` turns the sign condition into bounds, so every candidate
    satisfies ``x * y <= 0`` exactly.
    """
    cfg = cfg or SolverConfig()
    A, B = as_tensor(A), as_tensor(B)
    _guard(A, B, cfg)
    pp = _Pair(A, B)
    effort = {"orthants": 1 << (pp.n - 1)}
    if pp.m == 2:
        state, cert = _p_m2_exact(pp, cfg.tol_residual)
        effort["exact"] = True
        if state != "inconclusive":
            return Verdict("p", Outcome.REFUTED if state == "refuted" else Outcome.HOLDS, cert, effort, cfg.rng_seed)
    cert = _p_search(pp, cfg, effort)
    if cert is not None:
        return Verdict("p", Outcome.REFUTED, cert, effort, cfg.rng_seed)
    if pp.n <= 2:
        state, cert = _p_grid(pp, cfg, effort)
        outcome = {"holds": Outcome.HOLDS, "refuted": Outcome.REFUTED}.get(state, Outcome.INCONCLUSIVE)
        return Verdict("p", outcome, cert, effort, cfg.rng_seed)
    return Verdict("p", Outcome.INCONCLUSIVE, None, effort, cfg.rng_seed)


# --- determinant condition ---------------------------------------------------


def det_tensor(A, B, D1, D2) -> Tensor:
    """``A D1 + B D2`` with the matrix acting on every trailing index."""
    A, B = as_tensor(A), as_tensor(B)
    return shao_product(A, Tensor(np.asarray(D1, float))) + shao_product(B, Tensor(np.asarray(D2, float)))


def tensor_singular_direction(C, cfg: SolverConfig | None = None, salt=0):
    """Unit ``u`` with ``C u^{m-1} = 0`` found by multistart search, else ``None``."""
    cfg = cfg or SolverConfig()
    C = as_tensor(C)
    n = C.dim
    Cd, Cs = C.data, partial_symmetrize(C).data

    def fun(U):
        return np.hstack([power_batch(Cd, U), _sphere_rows(U)])

    def jac(U):
        return np.concatenate([jacobian_batch(Cs, U), 2 * U[:, None, :]], axis=1)

    rng = np.random.default_rng([cfg.rng_seed, 3, salt])
    U0 = np.vstack([np.eye(n), _unit_rows(rng.normal(size=(cfg.multistart_count, n)))])
    U, F, _ = _search(fun, jac, U0, cfg)
    for i in np.argsort(np.max(np.abs(F), axis=1), kind="stable"):
        u = U[i] / np.linalg.norm(U[i])
        if verify_singular_witness(C, u, cfg.tol_residual):
            return u
    return None


def det_witness_from_pair(x, y):
    """The ``(D1, D2, u)`` construction turning a P-pair counterexample into a singular ``A D1 + B D2``.

    Requires ``x * y <= 0``; returns diagonal vectors ``d1, d2`` and ``u`` with
    ``x = d1 * u`` and ``y = -d2 * u``.
    """
    x, y = np.asarray(x, float), np.asarray(y, float)
    u = np.zeros_like(x)
    d1 = np.zeros_like(x)
    d2 = np.abs(y)
    for i, (a, b) in enumerate(zip(x, y)):
        if a > 0:
            u[i], d1[i] = 1.0, a
        elif a < 0:
            u[i], d1[i] = -1.0, -a
        elif b > 0:
            u[i] = -1.0
        elif b < 0:
            u[i] = 1.0
        else:
            d1[i] = 1.0
    return d1, d2, u


def pair_from_det_witness(d1, d2, u):
    """``(D1 u, -D2 u)``: a singular direction of ``A D1 + B D2`` read as a P-pair candidate."""
    d1, d2, u = (np.asarray(v, float) for v in (d1, d2, u))
    return d1 * u, -d2 * u


def _det_cert(pp, d1, d2, u, tol):
    C = det_tensor(pp.A, pp.B, np.diag(d1), np.diag(d2))
    x, y = pair_from_det_witness(d1, d2, u)
    nz = np.linalg.norm(np.concatenate([x, y]))
    if not nz > 0:
        return None
    x, y = x / nz, y / nz
    if verify_singular_witness(C, u, tol) and verify_p_witness(pp.A, pp.B, x, y, tol):
        return {
            "kind": "det", "d1": _vec(d1), "d2": _vec(d2), "u": _vec(u), "x": _vec(x), "y": _vec(y),
            "residual_singular": float(np.max(np.abs(apply_power(C, u)))),
        }
    return None


def check_det_condition(A, B, cfg: SolverConfig | None = None) -> Verdict:
    """Look for nonnegative diagonal ``D1, D2`` with ``diag(D1 + D2) > 0`` and ``A D1 + B D2`` singular.

    Even order only. Diagonal families, in order: ``(I, 0)`` and ``(0, I)``,
    column-representative supports, the sign construction applied to the best
    P-pair search candidates, then uniform random diagonals.
    """
    cfg = cfg or SolverConfig()
    A, B = as_tensor(A), as_tensor(B)
    _guard(A, B, cfg)
    if A.order % 2:
        raise ValueError("the determinant characterization needs even order; odd orders have P pairs with singular A D1 + B D2")
    pp = _Pair(A, B)
    n, tol = pp.n, cfg.tol_residual
    effort = {"diagonals": 0}

    def attempt(d1, d2, salt):
        effort["diagonals"] += 1
        C = det_tensor(A, B, np.diag(d1), np.diag(d2))
        u = tensor_singular_direction(C, cfg, salt)
        return None if u is None else _det_cert(pp, d1, d2, u, tol)

    salt = 0
    for mask in range(1 << n):
        bits = pattern_bits(mask, n).astype(float)
        cert = attempt(1.0 - bits, bits, salt)
        salt += 1
        if cert is not None:
            return Verdict("p-det", Outcome.REFUTED, cert, effort, cfg.rng_seed)

    cand = _p_search(pp, cfg, effort, salt=4)
    if cand is not None:
        d1, d2, u = det_witness_from_pair(cand["x"], cand["y"])
        cert = _det_cert(pp, d1, d2, u, tol)
        effort["diagonals"] += 1
        if cert is not None:
            cert["family"] = "construction"
            return Verdict("p-det", Outcome.REFUTED, cert, effort, cfg.rng_seed)

    rng = np.random.default_rng([cfg.rng_seed, 5])
    for _ in range(max(1, cfg.multistart_count // 8)):
        d1, d2 = rng.uniform(0, 1, n), rng.uniform(0, 1, n)
        cert = attempt(d1, d2, salt)
        salt += 1
        if cert is not None:
            return Verdict("p-det", Outcome.REFUTED, cert, effort, cfg.rng_seed)
    return Verdict("p-det", Outcome.INCONCLUSIVE, None, effort, cfg.rng_seed)


# --- P tensors and the left-inverse reduction --------------------------------


def left_inverse_order2(A, tol: float = 1e-9):
    """The matrix ``M`` with ``M A = I`` (identity tensor), or ``None`` when none exists.

    ``M A = I`` reads ``M A_(1) = I_(1)`` on mode-1 unfoldings; it is solved by
    least squares and accepted when the residual is at most ``tol`` and ``M``
    is nonsingular.
    """
    A = as_tensor(A)
    n, m = A.dim, A.order
    U = A.unfold()
    I1 = identity_tensor(m, n).unfold()
    Mt, *_ = np.linalg.lstsq(U.T, I1.T, rcond=None)
    M = Mt.T
    if np.max(np.abs(M @ U - I1)) > tol:
        return None
    s = np.linalg.svd(M, compute_uv=False)
    if s[-1] <= 1e-12 * max(1.0, s[0]):
        return None
    return M


def _p_tensor_m2(T, tol):
    n = T.shape[0]
    for size in range(1, n + 1):
        for S in itertools.combinations(range(n), size):
            sub = T[np.ix_(S, S)]
            if np.linalg.det(sub) > 1e-12 * max(1.0, np.max(np.abs(sub))) ** size:
                continue
            vals, vecs = np.linalg.eig(sub)
            real = np.abs(vals.imag) <= 1e-9 * max(1.0, np.max(np.abs(vals)))
            cand = [i for i in np.flatnonzero(real) if vals[i].real <= 1e-12]
            for i in sorted(cand, key=lambda i: vals[i].real):
                x = np.zeros(n)
                x[list(S)] = np.real(vecs[:, i])
                x /= np.linalg.norm(x)
                if np.max(x * (T @ x)) <= tol:
                    return "refuted", x
    return "holds", None


def check_p_tensor(T, cfg: SolverConfig | None = None) -> Verdict:
    """Search for unit ``x`` with ``x_i (T x^{m-1})_i <= 0`` for every ``i``.

    Odd order is refuted by parity with ``x = e1`` or ``-e1``. ``m = 2`` is
    decided through principal minors and ``n <= 2`` by grid exhaustion.
    """
    cfg = cfg or SolverConfig()
    T = as_tensor(T)
    _guard(T, T, cfg)
    n, m, tol = T.dim, T.order, cfg.tol_residual
    effort = {}
    seed = cfg.rng_seed

    def refuted(x, how):
        x = np.asarray(x, float)
        return Verdict("p-tensor", Outcome.REFUTED, {
            "kind": "p-tensor", "x": _vec(x), "products": _vec(x * apply_power(T, x)), "via": how,
        }, effort, seed)

    if m % 2:
        e1 = np.eye(n)[0]
        for x in (e1, -e1):
            if verify_p_tensor_witness(T, x, tol):
                return refuted(x, "parity")
        raise AssertionError("parity witness failed")  # unreachable: the two products have opposite signs
    if m == 2:
        state, x = _p_tensor_m2(T.data, tol)
        effort["exact"] = True
        if state == "refuted":
            return refuted(x, "principal-minor")
        return Verdict("p-tensor", Outcome.HOLDS, {"kind": "principal-minors"}, effort, seed)

    Td, Ts = T.data, partial_symmetrize(T).data

    def prods(X):
        return X * power_batch(Td, X)

    def fun(X):
        return np.hstack([np.maximum(prods(X), 0.0), _sphere_rows(X)])

    def jac(X):
        P = power_batch(Td, X)
        G = jacobian_batch(Ts, X) * X[:, :, None]
        G[:, np.arange(n), np.arange(n)] += P
        G = np.where((X * P > 0)[:, :, None], G, 0.0)
        return np.concatenate([G, 2 * X[:, None, :]], axis=1)

    rng = np.random.default_rng([seed, 6])
    X0 = np.vstack([np.eye(n), -np.eye(n), _unit_rows(rng.normal(size=(cfg.multistart_count, n)))])
    X, F, it = _search(fun, jac, X0, cfg)
    effort.update(starts=len(X0), iterations=it)
    for i in np.argsort(np.max(np.abs(F), axis=1), kind="stable"):
        x = X[i] / np.linalg.norm(X[i])
        if verify_p_tensor_witness(T, x, tol):
            return refuted(x, "search")
    if n == 1:
        t = float(Td.ravel()[0])
        return Verdict("p-tensor", Outcome.HOLDS if t > tol else Outcome.INCONCLUSIVE,
                       {"kind": "n1-exact", "t": t} if t > tol else None, effort, seed)
    if n == 2:
        lip = m * frobenius(Td)
        to_x = lambda P: np.stack([np.cos(P[:, 0]), np.sin(P[:, 0])], axis=1)
        value = lambda P: np.max(prods(to_x(P)), axis=1)

        def polish(Xc):
            Xp, _, _ = _search(fun, jac, Xc, cfg)
            for x in np.vstack([Xc, Xp]):
                x = x / np.linalg.norm(x)
                if verify_p_tensor_witness(T, x, tol):
                    return x
            return None

        state, x, ev = _grid_certificate(value, [0.0], [2 * np.pi], lip, to_x, polish, tol)
        effort["grid_cells"] = ev
        if state == "refuted":
            return refuted(x, "grid")
        if state == "holds":
            return Verdict("p-tensor", Outcome.HOLDS, {"kind": "grid", "step": GRID_STEP, "lipschitz": lip, "cells": ev}, effort, seed)
    return Verdict("p-tensor", Outcome.INCONCLUSIVE, None, effort, seed)


def check_p_pair_via_left_inverse(A, B, cfg: SolverConfig | None = None) -> Verdict:
    """For even order and ``M A = I``: the pair is P exactly when ``M B`` is a P tensor.

    Raises :class:`NotApplicable` for odd order or when ``A`` has no order-2
    left inverse. A witness ``y`` for ``M B`` becomes the pair witness
    ``((M B y^{m-1})^{[1/(m-1)]}, y)``.
    """
    cfg = cfg or SolverConfig()
    A, B = as_tensor(A), as_tensor(B)
    _guard(A, B, cfg)
    if A.order % 2:
        raise NotApplicable("the left-inverse reduction needs even order")
    M = left_inverse_order2(A)
    if M is None:
        raise NotApplicable("A has no order-2 left inverse")
    MB = shao_product(Tensor(M), B)
    v = check_p_tensor(MB, cfg)
    cert = dict(v.certificate or {})
    cert["M"] = M.tolist()
    if v.refuted:
        y = np.asarray(cert["x"], float)
        x = inverse_power_vector(apply_power(MB, y), A.order - 1)
        x[x * y > 0] = 0.0
        nz = np.linalg.norm(np.concatenate([x, y]))
        x, y = x / nz, y / nz
        ok = verify_p_witness(A, B, x, y, cfg.tol_residual)
        cert.update(kind="p" if ok else "p-leftinv", tensor_witness=cert.pop("x"), x=_vec(x), y=_vec(y))
    return Verdict("p-leftinv", v.outcome, cert, v.effort, cfg.rng_seed)


def permutation_conjugate(A, P) -> Tensor:
    """``P A P^t`` in the tensor-product sense, for a permutation matrix ``P``."""
    A = as_tensor(A)
    P = np.asarray(P, dtype=float)
    n = A.dim
    if (
        P.shape != (n, n)
        or not np.all((P == 0) | (P == 1))
        or not np.all(P.sum(axis=0) == 1)
        or not np.all(P.sum(axis=1) == 1)
    ):
        raise ValueError("P must be an n x n permutation matrix")
    return shao_product(Tensor(P), shao_product(A, Tensor(P.T)))


# --- R pair ------------------------------------------------------------------


def _verify_r_clause(A, B, q, c, tol):
    clause = c.get("clause")
    q = np.asarray(q if q is not None else c["q"], float)
    inst = HTCPInstance(A, B, q)
    if clause == "i":
        return verify_r0_witness(A, B, np.asarray(c["x"]), np.asarray(c["y"]), tol)
    sols = [(np.asarray(s["x"]), np.asarray(s["y"])) for s in c.get("solutions", [])]
    from .solver import residual

    ok = all(np.max(np.abs(residual(inst, x, y))) <= tol and np.min(np.minimum(x, y)) >= -tol for x, y in sols)
    if clause == "a":
        return ok and len(sols) >= 2
    if clause == "b":
        return ok and len(sols) == 1 and np.min(sols[0][0] + sols[0][1]) <= tol
    if clause == "c":
        x, y = sols[0]
        unique, _ = hlcp_is_unique(jacobian(A, x), jacobian(B, y), (A.order - 1) * q, tol)
        return ok and not unique
    return False


def check_r_pair(A, B, q, cfg: SolverConfig | None = None) -> Verdict:
    """Check the R-pair conditions for the supplied ``q``.

    (i) R0 not refuted; (a) the HTCP has exactly one solution ``(xb, yb)``;
    (b) ``xb + yb > 0``; (c) HLCP(jacobian(A, xb), jacobian(B, yb), (m-1) q)
    has a unique solution. A failed clause refutes the pair for this ``q``
    only; the certificate names the clause.
    """
    cfg = cfg or SolverConfig()
    A, B = as_tensor(A), as_tensor(B)
    _guard(A, B, cfg)
    q = np.asarray(q, dtype=float)
    n, tol, seed = A.dim, cfg.tol_residual, cfg.rng_seed
    effort = {}
    clauses = {}

    def fail(clause, extra):
        cert = {"kind": "r-clause", "clause": clause, "q": _vec(q), **extra}
        return Verdict("r", Outcome.REFUTED, cert, effort, seed)

    r0 = check_r0_pair(A, B, cfg)
    effort["r0"] = r0.effort
    clauses["i"] = r0.outcome.value
    if r0.refuted:
        return fail("i", {"x": r0.certificate["x"], "y": r0.certificate["y"]})

    inst = HTCPInstance(A, B, q)
    rep = solve_pattern_enumeration(inst, cfg)
    effort["enumeration"] = rep.effort
    sol_dicts = [s.to_dict() for s in rep.solutions]
    if len(rep.solutions) >= 2:
        return fail("a", {"solutions": sol_dicts})
    if not rep.solutions:
        clauses["a"] = rep.status.value
        if rep.status is Status.PROVEN_EMPTY:
            return fail("a", {"solutions": [], "status": rep.status.value})
        return Verdict("r", Outcome.INCONCLUSIVE, {"clauses": clauses}, effort, seed)
    sol = rep.solutions[0]
    # n <= 2 enumeration includes the exact ray reduction of every pattern.
    clauses["a"] = "unique-exact" if n <= 2 else "unique-heuristic"

    if np.min(sol.x + sol.y) <= tol:
        return fail("b", {"solutions": sol_dicts})
    clauses["b"] = "positive"

    JA, JB = jacobian(A, sol.x), jacobian(B, sol.y)
    unique, hsols = hlcp_is_unique(JA, JB, (A.order - 1) * q, tol)
    if not unique:
        return fail("c", {"solutions": sol_dicts, "hlcp_solutions": [h.to_dict() for h in hsols]})
    clauses["c"] = "unique"

    cert = {
        "kind": "r-pair", "q": _vec(q), "x": _vec(sol.x), "y": _vec(sol.y),
        "hlcp_solution": hsols[0].to_dict(), "clauses": clauses,
    }
    certified = r0.holds and n <= 2
    return Verdict("r", Outcome.HOLDS if certified else Outcome.INCONCLUSIVE, cert, effort, seed)


# --- strong P pair -----------------------------------------------------------


def _strong_cert(x1, y1, x2, y2, how):
    return {"kind": "strong-p", "x1": _vec(x1), "y1": _vec(y1), "x2": _vec(x2), "y2": _vec(y2), "via": how}


def _injectivity_screen(T, cfg, salt):
    """A pair ``x1 != x2`` with ``T x1^{m-1} = T x2^{m-1}``, scaled to unit distance, or ``None``."""
    n, m = T.dim, T.order
    Td, Ts = T.data, partial_symmetrize(T).data
    rng = np.random.default_rng([cfg.rng_seed, 7, salt])
    for trial in range(4):
        x0 = _unit_rows(rng.normal(size=(1, n)))[0]
        target = apply_power(T, x0)
        X0 = rng.normal(size=(max(8, cfg.multistart_count // 4), n))
        res = damped_newton(
            lambda X: power_batch(Td, X) - target, lambda X: jacobian_batch(Ts, X), X0,
            tol=1e-3 * cfg.tol_residual, max_iter=cfg.max_newton_iters,
        )
        for x in res.z[res.converged]:
            d = np.linalg.norm(x - x0)
            if d > 1e-3:
                return x0 / d, x / d
    return None


def check_strong_p_pair(A, B, cfg: SolverConfig | None = None) -> Verdict:
    """Probe the two-point implication ``(x1-x2)*(y1-y2) <= 0``, equal differences ``=> x1=x2, y1=y2``.

    Odd order is refuted by parity with ``x1 = e1, x2 = -e1, y1 = y2 = 0``.
    For even order the probes are: P-pair counterexamples (``x2 = y2 = 0``),
    non-injectivity of ``x -> A x^{m-1}`` or ``y -> B y^{m-1}``, and a direct
    search over ``x1 = x2 + s*r, y1 = y2 - s*t`` with ``|(r, t)| = 1``. No
    probe certifies the property, so the best outcome is inconclusive.
    """
    cfg = cfg or SolverConfig()
    A, B = as_tensor(A), as_tensor(B)
    _guard(A, B, cfg)
    pp = _Pair(A, B)
    n, m, tol, seed = pp.n, pp.m, cfg.tol_residual, cfg.rng_seed
    z = np.zeros(n)
    effort = {}

    def refuted(cert):
        return Verdict("strong-p", Outcome.REFUTED, cert, effort, seed)

    if m % 2:
        e1 = np.eye(n)[0]
        x1, x2 = e1 / np.sqrt(2), -e1 / np.sqrt(2)
        return refuted(_strong_cert(x1, z, x2, z, "parity"))

    cert = _p_search(pp, cfg, effort, salt=8)
    if cert is not None:
        return refuted(_strong_cert(cert["x"], cert["y"], z, z, "p-pair"))

    for T, salt in ((A, 0), (B, 1)):
        hit = _injectivity_screen(T, cfg, salt)
        if hit is not None:
            a, b = hit
            w = (a, z, b, z) if salt == 0 else (z, a, z, b)
            if verify_strong_p_witness(A, B, *w, tol):
                return refuted(_strong_cert(*w, "injectivity-" + ("A" if salt == 0 else "B")))

    for k, s in enumerate(_orthants(n)):

        def parts(V, s=s):
            x2, y2, r, t = V[:, :n], V[:, n:2 * n], V[:, 2 * n:3 * n], V[:, 3 * n:]
            return x2 + s * r, y2 - s * t, x2, y2

        def fun(V):
            x1, y1, x2, y2 = parts(V)
            F = power_batch(pp.Ad, x1) - power_batch(pp.Ad, x2) - power_batch(pp.Bd, y1) + power_batch(pp.Bd, y2)
            rt = V[:, 2 * n:]
            return np.hstack([F, _sphere_rows(rt)])

        def jac(V, s=s):
            x1, y1, x2, y2 = parts(V)
            JA1, JA2 = jacobian_batch(pp.As, x1), jacobian_batch(pp.As, x2)
            JB1, JB2 = jacobian_batch(pp.Bs, y1), jacobian_batch(pp.Bs, y2)
            top = np.concatenate([JA1 - JA2, JB2 - JB1, JA1 * s, JB1 * s], axis=2)
            bottom = np.concatenate([np.zeros((len(V), 1, 2 * n)), 2 * V[:, None, 2 * n:]], axis=2)
            return np.concatenate([top, bottom], axis=1)

        def project(V):
            V = V.copy()
            V[:, 2 * n:] = np.maximum(V[:, 2 * n:], 0.0)
            return V

        rng = np.random.default_rng([seed, 9, k])
        K = cfg.multistart_count
        V0 = np.hstack([rng.normal(size=(K, 2 * n)), _unit_rows(np.abs(rng.normal(size=(K, 2 * n))))])
        V, F, it = _search(fun, jac, V0, cfg, project=project)
        effort["starts"] = effort.get("starts", 0) + K
        effort["iterations"] = effort.get("iterations", 0) + it
        for i in np.argsort(np.max(np.abs(F), axis=1), kind="stable"):
            v = project(V[i:i + 1])[0]
            rt = v[2 * n:]
            v[2 * n:] = rt / np.linalg.norm(rt)
            x1, y1, x2, y2 = (p[0] for p in parts(v[None, :]))
            if verify_strong_p_witness(A, B, x1, y1, x2, y2, tol):
                return refuted(_strong_cert(x1, y1, x2, y2, "difference-search"))
    return Verdict("strong-p", Outcome.INCONCLUSIVE, None, effort, seed)

"""Tensor eigenpairs (H, Z, B) and topological-degree estimates.

Eigenpairs come from multistart Newton on normalized square systems, so the
lists are complete only heuristically. Degrees are computed as the signed
count of preimages of a small regular value under the min-map residual, with
exact shortcuts for the cases where the degree is known in closed form.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from ._numerics import box_roots, damped_newton, dedup_rows, frobenius, jacobian_batch, power_batch
from .classifiers import check_p_pair, check_r0_pair, check_r_pair
from .solution import pattern_bits
from .solver import GuardExceeded, HTCPInstance, SolverConfig, generalized_jacobian
from .tensor import Tensor, apply_power, as_tensor, identity_tensor, jacobian, partial_symmetrize

__all__ = [
    "EigenKind",
    "EigenPair",
    "EigenResult",
    "DegreeEstimate",
    "DegreeUndefined",
    "h_eigen",
    "z_eigen",
    "b_eigen",
    "degree_estimate_pair",
    "degree_estimate_tcp",
    "degree_of_power_map",
    "MAX_EIGEN_DIM",
    "MAX_EIGEN_ORDER",
]

MAX_EIGEN_DIM = 6
MAX_EIGEN_ORDER = 5
EIGEN_DEDUP = 1e-6
DET_FLOOR = 1e-8
MAX_RESAMPLES = 10
TIE_MARGIN = 1e-9


class EigenKind(str, enum.Enum):
    H = "H"
    Z = "Z"
    B = "B"


@dataclass(frozen=True)
class EigenPair:
    lam: float
    x: np.ndarray
    residual: float
    kind: EigenKind

    def to_dict(self) -> dict:
        return {"lambda": self.lam, "x": [float(v) for v in self.x], "residual": self.residual, "kind": self.kind.value}


@dataclass
class EigenResult:
    """Eigenpairs found by the search; ``common_null`` holds B-eigen directions where both sides vanish."""

    pairs: list
    common_null: list = field(default_factory=list)
    confidence: str = "heuristic"
    effort: dict = field(default_factory=dict)

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self):
        return len(self.pairs)

    def __getitem__(self, i):
        return self.pairs[i]

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.array([p.lam for p in self.pairs])

    def to_dict(self) -> dict:
        return {
            "pairs": [p.to_dict() for p in self.pairs],
            "common_null": [[float(v) for v in x] for x in self.common_null],
            "confidence": self.confidence,
            "effort": self.effort,
        }


def _eigen_guard(T: Tensor):
    if T.dim > MAX_EIGEN_DIM or T.order > MAX_EIGEN_ORDER:
        raise GuardExceeded(f"eigen guard: n={T.dim} (max {MAX_EIGEN_DIM}), m={T.order} (max {MAX_EIGEN_ORDER})")


def _canonical_sign(x):
    k = int(np.argmax(np.abs(x)))
    return -x if x[k] < 0 else x


def _merge(pairs):
    """Merge pairs within ``EIGEN_DEDUP`` in ``(lambda, x)``; output sorted by ``lambda`` then ``x``."""
    if not pairs:
        return []
    pairs = sorted(pairs, key=lambda p: (round(p.lam, 9), tuple(np.round(p.x, 9))))
    P = np.array([np.concatenate([[p.lam], p.x]) for p in pairs])
    return [pairs[i] for i in dedup_rows(P, EIGEN_DEDUP)]


def _starts(cfg, n, salt):
    rng = np.random.default_rng([cfg.rng_seed, 11, salt])
    X = rng.normal(size=(cfg.multistart_count, n))
    return np.vstack([np.eye(n), X / np.linalg.norm(X, axis=1, keepdims=True)])


def h_eigen(T, cfg: SolverConfig | None = None) -> EigenResult:
    """H-eigenpairs ``T x^{m-1} = lambda x^{[m-1]}`` with ``|x|_inf = 1``.

    For each coordinate ``k`` the system is solved with ``x_k = 1`` fixed
    (valid because both sides have degree ``m-1``), keeping solutions where
    ``k`` attains the max norm. ``x`` and ``-x`` are merged.
    """
    cfg = cfg or SolverConfig()
    T = as_tensor(T)
    _eigen_guard(T)
    n, m, tol = T.dim, T.order, cfg.tol_residual
    Td, Ts = T.data, partial_symmetrize(T).data
    X0 = _starts(cfg, n, 0)
    found, iters = [], 0
    for k in range(n):
        others = [j for j in range(n) if j != k]

        def full(U):
            X = np.empty((U.shape[0], n))
            X[:, k] = 1.0
            X[:, others] = U[:, :-1]
            return X

        def fun(U):
            X = full(U)
            return power_batch(Td, X) - U[:, -1:] * X ** (m - 1)

        def jac(U):
            X = full(U)
            J = jacobian_batch(Ts, X)
            J[:, np.arange(n), np.arange(n)] -= U[:, -1:] * (m - 1) * X ** (m - 2)
            return np.concatenate([J[:, :, others], -(X ** (m - 1))[:, :, None]], axis=2)

        S = X0 / np.where(np.abs(X0[:, k:k + 1]) > 1e-3, X0[:, k:k + 1], 1.0)
        S = np.clip(S, -1.0, 1.0)
        lam0 = np.sum(power_batch(Td, S) * S ** (m - 1), axis=1) / np.maximum(np.sum(S ** (2 * m - 2), axis=1), 1e-300)
        U0 = np.hstack([S[:, others], lam0[:, None]])
        res = damped_newton(fun, jac, U0, tol=1e-3 * tol, max_iter=cfg.max_newton_iters, regularize=True)
        iters += int(res.iterations.sum())
        for u in res.z:
            x = full(u[None, :])[0]
            if np.max(np.abs(x)) > 1.0 + 1e-9:
                continue
            lam = float(u[-1])
            r = float(np.max(np.abs(apply_power(T, x) - lam * x ** (m - 1))))
            if r <= tol:
                found.append(EigenPair(lam, _canonical_sign(x), r, EigenKind.H))
    return EigenResult(_merge(found), effort={"starts": n * len(X0), "iterations": iters})


def _z_like(T, cfg, rhs_tensor, kind, salt):
    """Shared solver for ``T x^{m-1} = lambda R(x)`` with ``x.x = 1``; ``R`` is ``x`` or ``B x^{m-1}``."""
    T = as_tensor(T)
    _eigen_guard(T)
    n, m, tol = T.dim, T.order, cfg.tol_residual
    Td, Ts = T.data, partial_symmetrize(T).data
    if rhs_tensor is None:
        R = lambda X: X
        JR = lambda X: np.broadcast_to(np.eye(n), (X.shape[0], n, n))
    else:
        Rd, Rs = rhs_tensor.data, partial_symmetrize(rhs_tensor).data
        R = lambda X: power_batch(Rd, X)
        JR = lambda X: jacobian_batch(Rs, X)

    def fun(U):
        X, lam = U[:, :n], U[:, n:]
        return np.hstack([power_batch(Td, X) - lam * R(X), (np.sum(X * X, axis=1) - 1.0)[:, None]])

    def jac(U):
        X, lam = U[:, :n], U[:, n:]
        top = np.concatenate([jacobian_batch(Ts, X) - lam[:, :, None] * JR(X), -R(X)[:, :, None]], axis=2)
        bottom = np.concatenate([2 * X[:, None, :], np.zeros((len(U), 1, 1))], axis=2)
        return np.concatenate([top, bottom], axis=1)

    X0 = _starts(cfg, n, salt)
    RX = R(X0)
    lam0 = np.sum(power_batch(Td, X0) * RX, axis=1) / np.maximum(np.sum(RX * RX, axis=1), 1e-300)
    res = damped_newton(fun, jac, np.hstack([X0, lam0[:, None]]), tol=1e-3 * tol, max_iter=cfg.max_newton_iters, regularize=True)
    found, null = [], []
    TX = lambda x: apply_power(T, x)
    for u in res.z:
        x, lam = u[:n], float(u[n])
        nx = np.linalg.norm(x)
        if not nx > 0:
            continue
        x = x / nx
        rx = x if rhs_tensor is None else apply_power(rhs_tensor, x)
        if rhs_tensor is not None and np.max(np.abs(rx)) <= 1e-8:
            if np.max(np.abs(TX(x))) <= tol:
                null.append(_canonical_sign(x))
            continue
        r = float(np.max(np.abs(TX(x) - lam * rx)))
        if r > tol:
            continue
        if m % 2 == 0 or rhs_tensor is not None:
            x = _canonical_sign(x)
        found.append(EigenPair(lam, x, r, kind))
    if null:
        N = np.array(null)
        null = [N[i] for i in dedup_rows(N, EIGEN_DEDUP)]
    return EigenResult(_merge(found), null, effort={"starts": len(X0), "iterations": int(res.iterations.sum())})


def z_eigen(T, cfg: SolverConfig | None = None) -> EigenResult:
    """Z-eigenpairs ``T x^{m-1} = lambda x`` with ``x.x = 1``.

    For even ``m`` the pair ``(lambda, -x)`` is merged with ``(lambda, x)``;
    for odd ``m`` the partner is ``(-lambda, -x)`` and both are kept.
    """
    return _z_like(T, cfg or SolverConfig(), None, EigenKind.Z, 1)


def b_eigen(A, B, cfg: SolverConfig | None = None) -> EigenResult:
    """B-eigenpairs ``A x^{m-1} = lambda B x^{m-1}`` with ``x.x = 1``, ``x`` and ``-x`` merged.

    Directions with ``A x^{m-1} = B x^{m-1} = 0`` leave ``lambda`` undefined and
    are returned in ``common_null`` instead.
    """
    A, B = as_tensor(A), as_tensor(B)
    if A.order != B.order or A.dim != B.dim:
        raise ValueError("A and B must have the same order and dimension")
    return _z_like(A, cfg or SolverConfig(), B, EigenKind.B, 2)


# --- degree ------------------------------------------------------------------


class DegreeUndefined(ValueError):
    """The zero set is unbounded (R0 refuted), so the degree at 0 is not defined."""


@dataclass
class DegreeEstimate:
    value: int
    solutions_used: list
    regular_value: np.ndarray
    confidence: str
    flags: list = field(default_factory=list)
    effort: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "value": int(self.value),
            "confidence": self.confidence,
            "regular_value": [float(v) for v in self.regular_value],
            "solutions_used": [{"z": [float(v) for v in z], "sign": int(s)} for z, s in self.solutions_used],
            "flags": list(self.flags),
            "effort": self.effort,
        }


def _ray_preimages(T: Tensor, p):
    """All ``x`` with ``T x^{m-1} = p`` for ``n <= 2`` and even ``m`` (odd degree ``m-1``).

    ``x = s v`` with ``v = (1, tau)`` or ``(0, 1)``; ``tau`` solves the scalar
    polynomial ``p x T v^{m-1} = 0`` and ``s`` is the real odd root.
    """
    n, d = T.dim, T.order - 1
    p = np.asarray(p, float)
    out = []

    def along(v):
        Fv = apply_power(T, v)
        den = float(Fv @ Fv)
        if den == 0.0:
            return
        c = float(p @ Fv) / den
        if np.max(np.abs(c * Fv - p)) > 1e-8 * max(1.0, np.max(np.abs(p))):
            return
        out.append(np.sign(c) * abs(c) ** (1.0 / d) * v)

    if n == 1:
        along(np.ones(1))
        return out
    nodes = np.cos(np.pi * (np.arange(d + 1) + 0.5) / (d + 1))
    G = np.array([apply_power(T, np.array([1.0, t])) for t in nodes])
    coeff = np.polyfit(nodes, p[0] * G[:, 1] - p[1] * G[:, 0], d)
    coeff[np.abs(coeff) <= 1e-13 * max(1e-300, np.max(np.abs(G)) * np.max(np.abs(p)))] = 0.0
    nz = np.flatnonzero(coeff)
    if len(nz) and len(coeff) - nz[0] > 1:
        for r in np.roots(coeff[nz[0]:]):
            if abs(r.imag) <= 1e-7 * (1.0 + abs(r.real)):
                along(np.array([1.0, r.real]))
    along(np.array([0.0, 1.0]))
    return out


def degree_of_power_map(T, cfg: SolverConfig | None = None):
    """``deg(x -> T x^{m-1}, 0)`` by signed preimage count at a random point.

    Exact for ``m = 2`` (sign of ``det T``) and, for even ``m``, when ``n <= 2``
    (ray reduction). Other cases use multistart Newton and are heuristic.
    Returns ``(value, solutions, exact)``; raises ``ValueError`` when no
    nondegenerate regular value is found.
    """
    cfg = cfg or SolverConfig()
    T = as_tensor(T)
    n, m = T.dim, T.order
    if m == 2:
        d = np.linalg.det(T.data)
        return int(np.sign(d)), [], True
    exact = m % 2 == 0 and n <= 2
    Td, Ts = T.data, partial_symmetrize(T).data
    rng = np.random.default_rng([cfg.rng_seed, 12])
    for _ in range(MAX_RESAMPLES):
        p = rng.uniform(-1, 1, n)
        if exact:
            cands = [_polish_power(T, x, p) for x in _ray_preimages(T, p)]
        else:
            X0 = rng.normal(size=(cfg.multistart_count, n))
            res = damped_newton(lambda X: power_batch(Td, X) - p, lambda X: jacobian_batch(Ts, X), X0, tol=1e-13, max_iter=cfg.max_newton_iters)
            Z = res.z[res.converged]
            cands = list(Z[dedup_rows(Z, 1e-7 * max(1.0, float(np.max(np.abs(Z)))))]) if len(Z) else []
        sols = [(x, float(np.linalg.det(jacobian(T, x)))) for x in cands]
        if all(abs(dt) > DET_FLOOR for _, dt in sols):
            return int(sum(np.sign(dt) for _, dt in sols)), [(x, int(np.sign(dt))) for x, dt in sols], exact
    raise ValueError("no regular value found")


def _polish_power(T, x, p):
    Td, Ts = T.data, partial_symmetrize(T).data
    res = damped_newton(lambda X: power_batch(Td, X) - p, lambda X: jacobian_batch(Ts, X), x[None, :], tol=1e-14, max_iter=20)
    return res.z[0]


def _census(patterns, lo, hi, gjac_det, cfg, n, complete_search):
    """Signed preimage count over all patterns; returns ``(solutions, complete)`` or ``None`` if degenerate."""
    sols, complete = [], True
    for mask in range(1 << n):
        fun, jac, lip, to_z = patterns(mask)
        if complete_search:
            roots, ok = box_roots(
                fun, jac, lo, hi, lip, tol=1e-12, init_step=(hi - lo).max() / 16.0,
                min_width=1e-4 * max(1.0, float((hi - lo).max())), max_evals=1_500_000,
            )
            complete &= ok
        else:
            rng = np.random.default_rng([cfg.rng_seed, 13, mask])
            W0 = rng.uniform(lo, hi, size=(cfg.multistart_count, n))
            res = damped_newton(fun, jac, W0, tol=1e-12, max_iter=cfg.max_newton_iters)
            inside = np.all((res.z >= lo) & (res.z <= hi), axis=1) & res.converged
            roots = res.z[inside]
            if len(roots):
                roots = roots[dedup_rows(roots, 1e-7 * max(1.0, float(np.max(np.abs(roots)))))]
            complete = False
        bits = pattern_bits(mask, n)
        margin = TIE_MARGIN * max(1.0, float(np.max(np.abs(hi))))
        for w in roots:
            # Ties belong to the pattern where x carries the min.
            if np.any(w[bits] <= lo[bits] + margin):
                continue
            z = to_z(w)
            d = gjac_det(z)
            if abs(d) <= DET_FLOOR:
                return None
            sols.append((z, int(np.sign(d))))
    return sols, complete


def _pair_patterns(A, B, p, R):
    n, m = A.dim, A.order
    Ad, Bd = A.data, B.data
    As, Bs = partial_symmetrize(A).data, partial_symmetrize(B).data
    p1, p2 = p[:n], p[n:]
    lip_base = (m - 1) * (frobenius(Ad) + frobenius(Bd))

    def patterns(mask):
        bits = pattern_bits(mask, n)

        def split(W):
            # bit set: y_i is the min (= p1_i) and x_i is free; otherwise x_i = p1_i, y_i free.
            return np.where(bits, W, p1), np.where(bits, p1, W)

        def fun(W):
            X, Y = split(W)
            return power_batch(Ad, X) - power_batch(Bd, Y) - p2

        def jac(W):
            X, Y = split(W)
            return np.where(bits[None, None, :], jacobian_batch(As, X), -jacobian_batch(Bs, Y))

        def lip(lo, hi):
            rad = np.sqrt(np.sum(np.maximum(np.abs(lo), np.abs(hi)) ** 2, axis=1) + p1 @ p1)
            return lip_base * rad ** (m - 2)

        def to_z(w):
            X, Y = split(w[None, :])
            return np.concatenate([X[0], Y[0]])

        return fun, jac, lip, to_z

    return patterns


def _tcp_patterns(B, p, R):
    n, m = B.dim, B.order
    Bd, Bs = B.data, partial_symmetrize(B).data
    lip_base = (m - 1) * frobenius(Bd)

    def patterns(mask):
        bits = pattern_bits(mask, n)
        # bit set: (B x^{m-1})_i is the min (= p_i) and x_i is free; otherwise x_i = p_i.

        def full(W):
            return np.where(bits, W, p)

        def fun(W):
            X = full(W)
            return (power_batch(Bd, X) - p)[:, bits]

        def jac(W):
            X = full(W)
            return jacobian_batch(Bs, X)[:, bits][:, :, bits]

        def lip(lo, hi):
            rad = np.sqrt(np.sum(np.maximum(np.abs(lo), np.abs(hi)) ** 2, axis=1) + p @ p)
            return lip_base * rad ** (m - 2)

        return fun, jac, lip, full, bits

    return patterns


def _tcp_census(B, p, R, cfg, complete_search):
    n = B.dim
    patterns = _tcp_patterns(B, p, R)
    sols, complete = [], True
    for mask in range(1 << n):
        fun, jac, lip, full, bits = patterns(mask)
        k = int(bits.sum())
        lo, hi = p[bits], np.full(k, R)
        if k == 0:
            roots = np.zeros((1, 0))
        elif complete_search:
            roots, ok = box_roots(
                fun, jac, lo, hi, lip, tol=1e-12, init_step=(hi - lo).max() / 16.0,
                min_width=1e-4 * max(1.0, R), max_evals=1_500_000,
            )
            complete &= ok
        else:
            rng = np.random.default_rng([cfg.rng_seed, 14, mask])
            res = damped_newton(fun, jac, rng.uniform(lo, hi, size=(cfg.multistart_count, k)), tol=1e-12, max_iter=cfg.max_newton_iters)
            keep = np.all((res.z >= lo) & (res.z <= hi), axis=1) & res.converged
            roots = res.z[keep]
            if len(roots):
                roots = roots[dedup_rows(roots, 1e-7 * max(1.0, float(np.max(np.abs(roots)))))]
            complete = False
        for w in roots:
            W = np.broadcast_to(p, (1, n)).copy()
            W[0, bits] = w
            x = full(W)[0]
            if np.any(w <= lo + TIE_MARGIN * max(1.0, R)):
                continue
            Bx = apply_power(B, x)
            # Complementary side must not undercut the min value.
            if np.any(Bx[~bits] < p[~bits]):
                continue
            J = np.eye(n)
            J[bits] = jacobian(B, x)[bits]
            d = float(np.linalg.det(J))
            if abs(d) <= DET_FLOOR:
                return None
            sols.append((x, int(np.sign(d))))
    return sols, complete


def _regular_value(rng, n_top, n_bottom, R, m):
    """Random ``p`` scaled like ``Psi(R z)``: degree-1 rows by ``R``, degree-(m-1) rows by ``R^{m-1}``."""
    top = 1e-2 * R * rng.uniform(-1, 1, n_top)
    bottom = 1e-2 * R ** (m - 1) * rng.uniform(-1, 1, n_bottom)
    return np.concatenate([top, bottom])


def degree_estimate_pair(A, B, cfg: SolverConfig | None = None, q=None, method: str = "auto") -> DegreeEstimate:
    """``deg(Psi, 0)`` for the pair residual ``Psi(x, y) = [x ^ y; A x^{m-1} - B y^{m-1}]``.

    ``method="auto"`` first tries exact special cases: an R pair certified for
    the supplied ``q`` (index of the unique solution), then a certified even
    order P pair (``(-1)^n`` times the degree of ``x -> A x^{m-1}``). Otherwise,
    and always for ``method="census"``, it counts signed preimages of a random
    small ``p``: exhaustively by box exclusion when ``n <= 2``, by multistart
    Newton beyond that. Degenerate preimages trigger a resample.
    """
    cfg = cfg or SolverConfig()
    A, B = as_tensor(A), as_tensor(B)
    if method not in ("auto", "census"):
        raise ValueError("method must be 'auto' or 'census'")
    n, m = A.dim, A.order
    r0 = check_r0_pair(A, B, cfg)
    if r0.refuted:
        raise DegreeUndefined("R0 refuted: the zero set of Psi is unbounded")
    flags = []
    if m % 2:
        flags.append("odd order: a nonzero degree is not implied by the P property")
    if r0.outcome.value != "holds-with-certificate":
        flags.append("R0 not certified")

    if method == "auto":
        if q is not None:
            rv = check_r_pair(A, B, q, cfg)
            if rv.holds:
                x, y = np.asarray(rv.certificate["x"]), np.asarray(rv.certificate["y"])
                d = np.linalg.det(generalized_jacobian(HTCPInstance(A, B, q), x, y))
                if abs(d) > DET_FLOOR:
                    return DegreeEstimate(
                        int(np.sign(d)), [(np.concatenate([x, y]), int(np.sign(d)))], np.zeros(2 * n),
                        "exact-special-case", flags + ["R pair for supplied q"], {"r_pair": rv.effort},
                    )
        if m % 2 == 0 and (m == 2 or n <= 2):
            pv = check_p_pair(A, B, cfg)
            if pv.holds:
                val, sols, _ = degree_of_power_map(A, cfg)
                return DegreeEstimate(
                    (-1) ** n * val, [(np.concatenate([x, np.zeros(n)]), s) for x, s in sols], np.zeros(2 * n),
                    "exact-special-case", flags + ["even-order P pair"], {"p_pair": pv.effort},
                )

    R = cfg.search_radius
    rng = np.random.default_rng([cfg.rng_seed, 15])
    inst0 = HTCPInstance(A, B, np.zeros(n))
    for attempt in range(MAX_RESAMPLES):
        p = _regular_value(rng, n, n, R, m)
        patterns = _pair_patterns(A, B, p, R)
        lo, hi = p[:n].copy(), np.full(n, R)
        got = _census(
            patterns, lo, hi,
            lambda z: np.linalg.det(generalized_jacobian(inst0, z[:n], z[n:])),
            cfg, n, complete_search=n <= 2,
        )
        if got is None:
            continue
        sols, complete = got
        eff = {"attempts": attempt + 1, "preimages": len(sols), "exhaustive_box": bool(complete)}
        return DegreeEstimate(int(sum(s for _, s in sols)), sols, p, "heuristic", flags, eff)
    raise ValueError("no nondegenerate regular value found after resampling")


def degree_estimate_tcp(B, cfg: SolverConfig | None = None) -> DegreeEstimate:
    """``deg(psi, 0)`` for ``psi(x) = x ^ B x^{m-1}`` by signed preimage census of a small ``p``.

    Requires the R0 property of ``B`` (only ``x = 0`` solves ``x ^ B x^{m-1} = 0``),
    checked through the equivalent pair ``{I, B}``.
    """
    cfg = cfg or SolverConfig()
    B = as_tensor(B)
    n, m = B.dim, B.order
    if m % 2:
        raise ValueError("the TCP degree is defined here for even order")
    I = identity_tensor(m, n)
    r0 = check_r0_pair(I, B, cfg)
    if r0.refuted:
        raise DegreeUndefined("B is not R0: x ^ B x^{m-1} = 0 has a nonzero solution")
    flags = [] if r0.holds else ["R0 not certified"]
    R = cfg.search_radius
    rng = np.random.default_rng([cfg.rng_seed, 16])
    for attempt in range(MAX_RESAMPLES):
        p = 1e-2 * R * rng.uniform(-1, 1, n)
        got = _tcp_census(B, p, R, cfg, complete_search=n <= 2)
        if got is None:
            continue
        sols, complete = got
        eff = {"attempts": attempt + 1, "preimages": len(sols), "exhaustive_box": bool(complete)}
        return DegreeEstimate(int(sum(s for _, s in sols)), sols, p, "heuristic", flags, eff)
    raise ValueError("no nondegenerate regular value found after resampling")

"""HTCP residual map and solvers.

The problem HTCP(A, B, q) asks for ``(x, y)`` with ``x ^ y = 0`` and
``A x^{m-1} - B y^{m-1} = q``. Three solvers are provided:

* :func:`solve_newton` / :func:`solve_newton_multistart`: semismooth Newton on
  the min-map residual ``[x ^ y; A x^{m-1} - B y^{m-1} - q]``.
* :func:`solve_homotopy`: predictor-corrector continuation from ``t = 0`` to
  ``t = 1`` on ``[x ^ y; A x^{m-1} - B y^{m-1} - p(t)]``.
* :func:`solve_pattern_enumeration`: fixes one of ``x_i, y_i`` to zero for each
  of the ``2^n`` patterns and solves the reduced square polynomial system.
  For ``n <= 2`` the reduced system is also solved exactly through its
  one-parameter ray reduction.
"""

from __future__ import annotations

import enum
from dataclasses import asdict, dataclass, field

import numpy as np

from ._numerics import (
    chunked,
    damped_newton,
    jacobian_batch,
    power_batch,
    resolve_workers,
    run_chunks,
)
from .solution import SolutionPair, canonical_order, make_pair, merge_pairs, pattern_bits
from .tensor import (
    Tensor,
    apply_power,
    as_tensor,
    identity_tensor,
    inverse_power_vector,
    jacobian,
    partial_symmetrize,
)

__all__ = [
    "GuardExceeded",
    "HTCPInstance",
    "SolverConfig",
    "SolveReport",
    "Status",
    "residual",
    "generalized_jacobian",
    "solve_newton",
    "solve_newton_multistart",
    "solve_homotopy",
    "solve_pattern_enumeration",
    "solve",
    "METHODS",
    "verify_solution",
    "scale_instance",
    "scale_solution",
    "tcp_bridge_to_htcp",
    "tcp_bridge_from_htcp",
]


REGULARIZE = True


class GuardExceeded(ValueError):
    """Problem size beyond a configured enumeration guard."""


@dataclass(frozen=True)
class SolverConfig:
    """Tolerances, budgets and seeds shared by solvers and classifiers.

    ``workers`` is a parallelism hint only; results never depend on it.
    """

    tol_residual: float = 1e-9
    tol_dedup: float = 1e-7
    max_newton_iters: int = 100
    multistart_count: int = 64
    rng_seed: int = 0
    homotopy_steps: int = 50
    search_radius: float = 10.0
    workers: int | None = None
    max_enum_dim: int = 12
    max_order: int = 6

    def __post_init__(self):
        for name in ("tol_residual", "tol_dedup", "search_radius"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        for name in ("max_newton_iters", "multistart_count", "homotopy_steps", "max_enum_dim", "max_order"):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"{name} must be a positive integer")

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("workers")
        return d


class Status(str, enum.Enum):
    FOUND = "found"
    NONE_FOUND = "none-found"
    PROVEN_EMPTY = "proven-empty"
    GUARD_EXCEEDED = "guard-exceeded"


@dataclass
class SolveReport:
    solutions: list
    status: Status
    effort: dict = field(default_factory=dict)
    method: str = ""

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "status": self.status.value,
            "solutions": [s.to_dict() for s in self.solutions],
            "effort": self.effort,
        }


@dataclass(frozen=True, eq=False)
class HTCPInstance:
    """The data ``(A, B, q)`` of one HTCP; ``A`` and ``B`` share order and dimension."""

    A: Tensor
    B: Tensor
    q: np.ndarray

    def __post_init__(self):
        A, B = as_tensor(self.A), as_tensor(self.B)
        q = np.array(self.q, dtype=float)
        if A.order != B.order or A.dim != B.dim:
            raise ValueError("A and B must have the same order and dimension")
        if q.shape != (A.dim,):
            raise ValueError(f"q must have length {A.dim}")
        if not np.all(np.isfinite(q)):
            raise ValueError("q must be finite")
        q.setflags(write=False)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "q", q)

    @property
    def order(self) -> int:
        return self.A.order

    @property
    def dim(self) -> int:
        return self.A.dim


class _PairMap:
    """Batched evaluation of ``(x, y) -> A x^{m-1} - B y^{m-1}`` and its Jacobian blocks."""

    def __init__(self, A: Tensor, B: Tensor):
        self.A, self.B = A, B
        self.m, self.n = A.order, A.dim
        self.Ad, self.Bd = A.data, B.data
        self.As, self.Bs = partial_symmetrize(A).data, partial_symmetrize(B).data

    def value(self, X, Y):
        return power_batch(self.Ad, X) - power_batch(self.Bd, Y)

    def jac_x(self, X):
        return jacobian_batch(self.As, X)

    def jac_y(self, Y):
        return -jacobian_batch(self.Bs, Y)

    def psi(self, Z, p):
        n = self.n
        X, Y = Z[:, :n], Z[:, n:]
        return np.hstack([np.minimum(X, Y), self.value(X, Y) - p])

    def gjac(self, Z):
        n = self.n
        X, Y = Z[:, :n], Z[:, n:]
        S = Z.shape[0]
        J = np.zeros((S, 2 * n, 2 * n))
        pick_y = Y < X
        rows = np.arange(n)
        J[:, rows, rows] = np.where(pick_y, 0.0, 1.0)
        J[:, rows, n + rows] = np.where(pick_y, 1.0, 0.0)
        J[:, n:, :n] = self.jac_x(X)
        J[:, n:, n:] = self.jac_y(Y)
        return J


def _check_xy(inst, x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != (inst.dim,) or y.shape != (inst.dim,):
        raise ValueError(f"x and y must have length {inst.dim}")
    return x, y


def residual(inst: HTCPInstance, x, y) -> np.ndarray:
    """Stacked residual ``[x ^ y; A x^{m-1} - B y^{m-1} - q]`` of length ``2n``."""
    x, y = _check_xy(inst, x, y)
    return np.concatenate([np.minimum(x, y), apply_power(inst.A, x) - apply_power(inst.B, y) - inst.q])


def generalized_jacobian(inst: HTCPInstance, x, y) -> np.ndarray:
    """An element of the generalized Jacobian of :func:`residual`.

    Row ``i`` of the top block differentiates ``min(x_i, y_i)`` with respect to
    ``y_i`` when ``y_i < x_i`` and with respect to ``x_i`` otherwise (ties pick
    ``x``). The bottom blocks are ``jacobian(A, x)`` and ``-jacobian(B, y)``.
    """
    x, y = _check_xy(inst, x, y)
    return _PairMap(inst.A, inst.B).gjac(np.concatenate([x, y])[None, :])[0]


def verify_solution(inst: HTCPInstance, pair: SolutionPair, tol: float = 1e-9) -> bool:
    x, y = _check_xy(inst, pair.x, pair.y)
    r = residual(inst, x, y)
    n = inst.dim
    return bool(
        np.max(np.abs(r[:n]), initial=0.0) <= tol
        and np.max(np.abs(r[n:]), initial=0.0) <= tol
        and np.min(np.minimum(x, y), initial=0.0) >= -tol
    )


def _finalize(inst: HTCPInstance, z: np.ndarray, tol: float):
    """Snap a Newton end point to an exact complementary pair and verify; None if it fails.

    Coordinates within ``tol`` of complementarity are set to zero. Components
    below ``1e-3 * max(1, |z|)`` are then zeroed too when that does not raise
    the residual: near degenerate roots (e.g. ``0`` for ``q = 0`` and
    ``m >= 3``) the residual is far smaller than the distance to the root.
    """
    n = inst.dim
    x, y = z[:n].copy(), z[n:].copy()
    if np.max(np.abs(np.minimum(x, y)), initial=0.0) > tol:
        return None

    def eq(cx, cy):
        return apply_power(inst.A, cx) - apply_power(inst.B, cy) - inst.q

    xs, ys = x.copy(), y.copy()
    xs[x <= y] = 0.0
    ys[y < x] = 0.0
    for cx, cy in ((xs, ys), (x, y)):
        r = eq(cx, cy)
        if np.max(np.abs(r), initial=0.0) <= tol and np.max(np.abs(np.minimum(cx, cy)), initial=0.0) <= tol:
            thresh = 1e-3 * max(1.0, float(np.max(np.abs(np.concatenate([cx, cy])), initial=0.0)))
            tx, ty = np.where(np.abs(cx) <= thresh, 0.0, cx), np.where(np.abs(cy) <= thresh, 0.0, cy)
            rt = eq(tx, ty)
            if np.max(np.abs(rt), initial=0.0) <= np.max(np.abs(r), initial=0.0):
                cx, cy, r = tx, ty, rt
            return make_pair(cx, cy, r)
    return None


def _collect(inst, Z, tol, dedup_tol):
    pairs = [p for p in (_finalize(inst, z, tol) for z in Z) if p is not None]
    return canonical_order(merge_pairs(pairs, dedup_tol))


def solve_newton(inst: HTCPInstance, start, cfg: SolverConfig | None = None) -> SolveReport:
    """Semismooth Newton from one start ``(x0, y0)`` (a pair or a length-2n vector)."""
    cfg = cfg or SolverConfig()
    if isinstance(start, (tuple, list)) and len(start) == 2:
        z0 = np.concatenate([np.asarray(start[0], float), np.asarray(start[1], float)])
    else:
        z0 = np.asarray(start, dtype=float)
    if z0.shape != (2 * inst.dim,):
        raise ValueError(f"start must have length {2 * inst.dim}")
    pm = _PairMap(inst.A, inst.B)
    res = damped_newton(
        lambda Z: pm.psi(Z, inst.q), pm.gjac, z0[None, :],
        tol=0.01 * cfg.tol_residual, max_iter=cfg.max_newton_iters, regularize=REGULARIZE,
    )
    sols = _collect(inst, res.z, cfg.tol_residual, cfg.tol_dedup)
    return SolveReport(
        sols,
        Status.FOUND if sols else Status.NONE_FOUND,
        {"starts": 1, "iterations": int(res.iterations.sum())},
        "newton",
    )


def _starts_box(rng, count, dim, radius):
    return rng.uniform(-radius, radius, size=(count, dim))


def solve_newton_multistart(inst: HTCPInstance, cfg: SolverConfig | None = None) -> SolveReport:
    """Semismooth Newton from ``cfg.multistart_count`` uniform starts in ``[-r, r]^{2n}``."""
    cfg = cfg or SolverConfig()
    rng = np.random.default_rng(cfg.rng_seed)
    Z0 = _starts_box(rng, cfg.multistart_count, 2 * inst.dim, cfg.search_radius)
    pm = _PairMap(inst.A, inst.B)

    def run(bounds):
        lo, hi = bounds
        return damped_newton(
            lambda Z: pm.psi(Z, inst.q), pm.gjac, Z0[lo:hi],
            tol=0.01 * cfg.tol_residual, max_iter=cfg.max_newton_iters, regularize=REGULARIZE,
        )

    results = run_chunks(run, chunked(len(Z0)), resolve_workers(cfg.workers))
    Z = np.vstack([r.z for r in results]) if results else np.zeros((0, 2 * inst.dim))
    iters = int(sum(r.iterations.sum() for r in results))
    sols = _collect(inst, Z, cfg.tol_residual, cfg.tol_dedup)
    return SolveReport(
        sols,
        Status.FOUND if sols else Status.NONE_FOUND,
        {"starts": len(Z0), "iterations": iters},
        "newton",
    )


def solve_homotopy(inst: HTCPInstance, cfg: SolverConfig | None = None, max_attempts: int = 4) -> SolveReport:
    """Predictor-corrector continuation on ``[x ^ y; A x^{m-1} - B y^{m-1} - p(t)]``.

    The path starts at ``z = (0, 0)`` with ``p(t) = t q``. When the Jacobian is
    singular at the origin (always the case for ``m >= 3``) the origin cannot be
    left by Newton steps, so the path starts instead from a random
    complementary point ``z0`` with ``p(t) = (1 - t) F(z0) + t q``, which
    reduces to the former when ``z0 = 0``. A failed corrector halves the step;
    below ``1 / (100 * homotopy_steps)`` the attempt is abandoned and the last
    good ``(z, t)`` is reported in ``effort``.
    """
    cfg = cfg or SolverConfig()
    n = inst.dim
    pm = _PairMap(inst.A, inst.B)
    q = inst.q
    rng = np.random.default_rng(cfg.rng_seed)
    h_nom = 1.0 / cfg.homotopy_steps
    h_min = h_nom / 100.0
    corrector_iters = min(cfg.max_newton_iters, 30)
    effort = {"attempts": 0, "steps": 0, "halvings": 0, "iterations": 0}

    z0 = np.zeros(2 * n)
    J0 = pm.gjac(z0[None, :])[0]
    use_origin = not np.any(q) or np.linalg.cond(J0) < 1e12
    last = None
    for attempt in range(max_attempts if not use_origin else 1):
        effort["attempts"] += 1
        if use_origin:
            z = z0.copy()
        else:
            u = rng.normal(size=n)
            z = np.concatenate([np.maximum(u, 0.0), np.maximum(-u, 0.0)])
        p0 = pm.value(z[None, :n], z[None, n:])[0]
        t, h = 0.0, h_nom
        while t < 1.0:
            h = min(h, 1.0 - t)
            t_new = t + h
            p_new = p0 + t_new * (q - p0)
            J = pm.gjac(z[None, :])[0]
            rhs = np.concatenate([np.zeros(n), q - p0])
            try:
                dz = np.linalg.solve(J, rhs) if np.linalg.cond(J) < 1e12 else np.zeros(2 * n)
            except np.linalg.LinAlgError:
                dz = np.zeros(2 * n)
            zp = z + h * dz
            res = damped_newton(
                lambda Z: pm.psi(Z, p_new), pm.gjac, zp[None, :],
                tol=0.01 * cfg.tol_residual, max_iter=corrector_iters, regularize=REGULARIZE,
            )
            effort["iterations"] += int(res.iterations.sum())
            ok = np.max(np.abs(res.f[0])) <= cfg.tol_residual
            if ok:
                z, t = res.z[0], t_new
                effort["steps"] += 1
                h = min(2 * h, h_nom)
            else:
                effort["halvings"] += 1
                h *= 0.5
                if h < h_min:
                    break
        last = (z.copy(), t)
        if t >= 1.0:
            sols = _collect(inst, z[None, :], cfg.tol_residual, cfg.tol_dedup)
            if sols:
                effort["path_end"] = {"t": 1.0, "z": [float(v) for v in z]}
                return SolveReport(sols, Status.FOUND, effort, "homotopy")
    effort["path_end"] = {"t": float(last[1]), "z": [float(v) for v in last[0]]}
    return SolveReport([], Status.NONE_FOUND, effort, "homotopy")


# --- pattern enumeration --------------------------------------------------


class _ReducedSystem:
    """``w -> A x^{m-1} - B y^{m-1} - q`` with ``x = w`` on the pattern and ``y = w`` off it."""

    def __init__(self, pm: _PairMap, q, mask):
        self.pm, self.q = pm, np.asarray(q, dtype=float)
        self.bits = pattern_bits(mask, pm.n)
        self.mask = mask

    def split(self, W):
        return np.where(self.bits, W, 0.0), np.where(self.bits, 0.0, W)

    def fun(self, W):
        X, Y = self.split(W)
        return self.pm.value(X, Y) - self.q

    def jac(self, W):
        X, Y = self.split(W)
        return np.where(self.bits[None, None, :], self.pm.jac_x(X), self.pm.jac_y(Y))


def _nonneg_starts(rng, count, dim, radius):
    half = count // 2
    box = rng.uniform(0.0, radius, size=(half, dim))
    d = np.abs(rng.normal(size=(count - half, dim)))
    d /= np.maximum(np.linalg.norm(d, axis=1, keepdims=True), 1e-300)
    r = 10.0 ** rng.uniform(-2.0, np.log10(radius), size=(count - half, 1))
    return np.vstack([box, r * d])


def _ray_candidates(rs: _ReducedSystem, degree: int):
    """Exact candidate roots ``w >= 0`` for ``n <= 2`` through the ray reduction ``w = s v``."""
    n = rs.pm.n
    q = rs.q
    out = []
    F0 = lambda V: rs.fun(V) + q  # homogeneous part, degree m-1

    def along(v):
        Fv = F0(v[None, :])[0]
        den = float(Fv @ Fv)
        if den == 0.0:
            return
        s = float(q @ Fv) / den
        if s > 0:
            out.append(s ** (1.0 / degree) * v)

    if not np.any(q):
        out.append(np.zeros(n))
        return out
    if n == 1:
        along(np.ones(1))
        return out
    # w = w1 * (1, tau): q x F(1, tau) = 0 is a polynomial of degree <= m-1 in tau.
    nodes = np.cos(np.pi * (np.arange(degree + 1) + 0.5) / (degree + 1))
    G = F0(np.stack([np.ones_like(nodes), nodes], axis=1))
    coeff = np.polyfit(nodes, q[0] * G[:, 1] - q[1] * G[:, 0], degree)
    scale = max(1e-300, float(np.max(np.abs(G))) * float(np.max(np.abs(q))))
    coeff[np.abs(coeff) <= 1e-13 * scale] = 0.0
    nz = np.flatnonzero(coeff)
    if len(nz):
        coeff = coeff[nz[0]:]
        for r in np.roots(coeff) if len(coeff) > 1 else []:
            if abs(r.imag) <= 1e-7 * (1.0 + abs(r.real)) and r.real >= -1e-9:
                along(np.array([1.0, max(r.real, 0.0)]))
    along(np.array([0.0, 1.0]))
    return out


def _grid_scan_hits(rs: _ReducedSystem, radius, step, thresh) -> bool:
    n = rs.pm.n
    axis = np.arange(0.0, radius + 0.5 * step, step)
    W = np.stack(np.meshgrid(*[axis] * n, indexing="ij"), -1).reshape(-1, n)
    hits = False
    for lo in range(0, len(W), 65536):
        block = W[lo:lo + 65536]
        if np.any(np.max(np.abs(rs.fun(block)), axis=1) < thresh):
            hits = True
            break
    return hits


def solve_pattern_enumeration(inst: HTCPInstance, cfg: SolverConfig | None = None) -> SolveReport:
    """Solve every pattern's reduced system and collect the nonnegative roots.

    Status is ``proven-empty`` only for ``n <= 2`` when no pattern yields a
    root, neither by multistart Newton nor by the exact ray reduction, and a
    grid of step 0.05 over ``[0, search_radius]^n`` shows no residual below
    ``10 * tol_residual``.
    """
    cfg = cfg or SolverConfig()
    n, m = inst.dim, inst.order
    if n > cfg.max_enum_dim or m > cfg.max_order:
        raise GuardExceeded(f"enumeration guard: n={n} (max {cfg.max_enum_dim}), m={m} (max {cfg.max_order})")
    pm = _PairMap(inst.A, inst.B)
    tol = cfg.tol_residual

    def run(mask):
        rs = _ReducedSystem(pm, inst.q, mask)
        rng = np.random.default_rng([cfg.rng_seed, mask])
        W0 = _nonneg_starts(rng, cfg.multistart_count, n, cfg.search_radius)
        if n <= 2:
            cand = _ray_candidates(rs, m - 1)
            if cand:
                W0 = np.vstack([np.array(cand), W0])
        blocks = [
            damped_newton(rs.fun, rs.jac, W0[lo:hi], tol=0.01 * tol, max_iter=cfg.max_newton_iters)
            for lo, hi in chunked(len(W0))
        ]
        W = np.vstack([b.z for b in blocks])
        iters = int(sum(b.iterations.sum() for b in blocks))
        found = []
        for w in W:
            if np.min(w) < -tol:
                continue
            w = np.maximum(w, 0.0)
            X, Y = rs.split(w[None, :])
            pair = _finalize(inst, np.concatenate([X[0], Y[0]]), tol)
            if pair is not None:
                found.append(pair)
        return found, iters, len(W0)

    per_mask = run_chunks(run, range(1 << n), resolve_workers(cfg.workers))
    pairs = [p for found, _, _ in per_mask for p in found]
    sols = canonical_order(merge_pairs(canonical_order(pairs), cfg.tol_dedup))
    effort = {
        "patterns": 1 << n,
        "starts": int(sum(s for _, _, s in per_mask)),
        "iterations": int(sum(i for _, i, _ in per_mask)),
    }
    if sols:
        return SolveReport(sols, Status.FOUND, effort, "enumerate")
    if n <= 2:
        hits = any(
            _grid_scan_hits(_ReducedSystem(pm, inst.q, mask), cfg.search_radius, 0.05, 10 * tol)
            for mask in range(1 << n)
        )
        effort["grid_step"] = 0.05
        if not hits:
            return SolveReport([], Status.PROVEN_EMPTY, effort, "enumerate")
    return SolveReport([], Status.NONE_FOUND, effort, "enumerate")


# --- scaling and the TCP bridge ---------------------------------------------


METHODS = ("newton", "homotopy", "enumerate", "all")


def solve(inst: HTCPInstance, cfg: SolverConfig | None = None, method: str = "all") -> SolveReport:
    """Run one solver, or all three, and merge their verified solutions.

    The status is ``found`` when any verified solution exists, otherwise
    ``proven-empty`` if enumeration proved it, otherwise ``none-found``.
    """
    cfg = cfg or SolverConfig()
    runs = {"enumerate": solve_pattern_enumeration, "newton": solve_newton_multistart, "homotopy": solve_homotopy}
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    reports = [runs[name](inst, cfg) for name in (runs if method == "all" else [method])]
    sols = [s for r in reports for s in r.solutions if verify_solution(inst, s, cfg.tol_residual)]
    sols = canonical_order(merge_pairs(canonical_order(sols), cfg.tol_dedup))
    if sols:
        status = Status.FOUND
    elif any(r.status is Status.PROVEN_EMPTY for r in reports):
        status = Status.PROVEN_EMPTY
    else:
        status = Status.NONE_FOUND
    return SolveReport(sols, status, {r.method: r.effort for r in reports}, method)


def scale_instance(inst: HTCPInstance, mu: float) -> HTCPInstance:
    """``(A, B, mu^{m-1} q)``: the instance solved by ``(mu x, mu y)`` whenever ``(x, y)`` solves ``inst``."""
    if not mu > 0:
        raise ValueError("mu must be positive")
    return HTCPInstance(inst.A, inst.B, mu ** (inst.order - 1) * inst.q)


def scale_solution(pair: SolutionPair, mu: float, order: int | None = None) -> SolutionPair:
    """``(mu x, mu y)``; residuals are rescaled when ``order`` is known."""
    if not mu > 0:
        raise ValueError("mu must be positive")
    eq = pair.residual_equation * mu ** (order - 1) if order else float("nan")
    return SolutionPair(mu * pair.x, mu * pair.y, mu * pair.residual_complementarity, eq, pair.pattern)


def tcp_bridge_to_htcp(B: Tensor, q, y, tol: float = 1e-9) -> SolutionPair:
    """Map a TCP(B, q) solution ``y`` to the HTCP(I, B, q) pair ``((B y^{m-1} + q)^{[1/(m-1)]}, y)``."""
    B = as_tensor(B)
    if B.order % 2:
        raise ValueError("the TCP bridge needs an even-order tensor")
    y = np.asarray(y, dtype=float)
    s = apply_power(B, y) + np.asarray(q, dtype=float)
    if np.any(s < -tol):
        raise ValueError("B y^{m-1} + q has a negative component; y is not a TCP solution")
    x = inverse_power_vector(np.maximum(s, 0.0), B.order - 1)
    I = identity_tensor(B.order, B.dim)
    return make_pair(x, y, apply_power(I, x) - apply_power(B, y) - np.asarray(q, dtype=float))


def tcp_bridge_from_htcp(pair: SolutionPair) -> np.ndarray:
    return np.asarray(pair.y, dtype=float).copy()


def jacobian_blocks(inst: HTCPInstance, x, y):
    """``(jacobian(A, x), jacobian(B, y))`` at a point."""
    return jacobian(inst.A, x), jacobian(inst.B, y)

"""Cross-check of the iterative solvers against exhaustive enumeration."""

from __future__ import annotations

import numpy as np

from .generate import random_instance
from .hlcp import solve_hlcp_enumerate
from .solver import HTCPInstance, SolverConfig, solve_homotopy, solve_newton_multistart, solve_pattern_enumeration

__all__ = ["CONTAINMENT_TOL", "oracle_check"]

CONTAINMENT_TOL = 1e-6


def _contained(sol, pool, tol):
    return any(np.max(np.abs(sol.z - p.z)) <= tol for p in pool)


def _same_sets(a, b, tol):
    return len(a) == len(b) and all(_contained(s, b, tol) for s in a) and all(_contained(s, a, tol) for s in b)


def oracle_check(count: int, max_dim: int = 3, orders=(2, 3, 4), cfg: SolverConfig | None = None) -> dict:
    """Run Newton multistart and homotopy on ``count`` seeded random instances.

    Every solution they return must lie within ``CONTAINMENT_TOL`` of an
    enumerated solution; for ``m = 2`` enumeration must also match the HLCP
    solver exactly. Instance ``k`` has ``n = 1 + k % max_dim`` and order
    ``orders[k % len(orders)]``, drawn from ``default_rng([seed, k])``.
    """
    cfg = cfg or SolverConfig()
    orders = tuple(int(m) for m in orders)
    if count < 0 or max_dim < 1 or not orders:
        raise ValueError("need count >= 0, max_dim >= 1 and at least one order")
    rows, bad = [], []
    for k in range(count):
        n, m = 1 + k % max_dim, orders[k % len(orders)]
        A, B, q = random_instance(np.random.default_rng([cfg.rng_seed, 17, k]), n, m)
        inst = HTCPInstance(A, B, q)
        enum_rep = solve_pattern_enumeration(inst, cfg)
        row = {"index": k, "n": n, "m": m, "enumerated": len(enum_rep.solutions), "status": enum_rep.status.value}
        problems = []
        for name, rep in (("newton", solve_newton_multistart(inst, cfg)), ("homotopy", solve_homotopy(inst, cfg))):
            row[name] = len(rep.solutions)
            missing = [s for s in rep.solutions if not _contained(s, enum_rep.solutions, CONTAINMENT_TOL)]
            if missing:
                problems.append({"method": name, "uncontained": [s.to_dict() for s in missing]})
        if m == 2:
            h = solve_hlcp_enumerate(A.data, B.data, q, cfg.tol_residual)
            if not h.degenerate_patterns and not _same_sets(h.solutions, enum_rep.solutions, CONTAINMENT_TOL):
                problems.append({"method": "hlcp", "hlcp": len(h.solutions)})
        if problems:
            bad.append({"index": k, "problems": problems})
        rows.append(row)
    agree = count - len(bad)
    return {
        "count": count,
        "agreement_rate": 1.0 if count == 0 else agree / count,
        "agreements": agree,
        "disagreements": bad,
        "instances": rows,
    }

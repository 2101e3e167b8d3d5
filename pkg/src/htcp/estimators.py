"""scikit-learn style facade over the instance solvers."""

from __future__ import annotations

from sklearn.base import BaseEstimator

from .solver import HTCPInstance, SolverConfig, solve
from .validation import check_instance

__all__ = ["HTCPSolver"]


class HTCPSolver(BaseEstimator):
    """Solve ``x ^ y = 0, A x^{m-1} - B y^{m-1} = q`` with the chosen method.

    ``method`` is one of ``newton``, ``homotopy``, ``enumerate`` or ``all``.
    After ``fit(A, B, q)`` the verified, deduplicated solutions are in
    ``solutions_``, the merged status in ``status_`` and the full
    ``SolveReport`` in ``report_``.
    """

    def __init__(self, method="all", tol=1e-9, n_starts=64, radius=10.0, random_state=0, workers=None):
        self.method = method
        self.tol = tol
        self.n_starts = n_starts
        self.radius = radius
        self.random_state = random_state
        self.workers = workers

    def fit(self, A, B, q):
        cfg = SolverConfig(
            tol_residual=self.tol,
            multistart_count=self.n_starts,
            search_radius=self.radius,
            rng_seed=self.random_state,
            workers=self.workers,
        )
        A, B, q = check_instance(A, B, q, cfg.max_order)
        self.instance_ = HTCPInstance(A, B, q)
        self.report_ = solve(self.instance_, cfg, self.method)
        self.solutions_ = self.report_.solutions
        self.status_ = self.report_.status
        return self

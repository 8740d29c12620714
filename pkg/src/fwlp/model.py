"""Problem data, solver parameters, and mutable solver state.

The solvers work on standard-form problems

    minimize c'x  subject to  Ax = b, x >= 0,

restricted to the compact sets Delta = {x >= 0 : e'x <= xi} (primal) and
Gamma = [-eta, eta]^m (dual).  A is stored in compressed-sparse-column
form so that a single column is retrievable in time proportional to its
nonzero count, which is what both solvers and the screening machinery
rely on.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp


class LpError(Exception):
    """Base class for problem/solver errors."""


class DimensionMismatch(LpError):
    pass


class NonFiniteEntry(LpError):
    pass


class StandardFormLP:
    """Immutable standard-form problem data (A, b, c) with column access.

    Parameters
    ----------
    A : array-like or scipy sparse, shape (m, n)
    b : array-like, shape (m,)
    c : array-like, shape (n,)

    The matrix is normalized to CSC with int64 index arrays; ``indptr``,
    ``indices`` and ``data`` are the canonical representation consumed by
    the compiled kernels.
    """

    def __init__(self, A, b, c):
        A = sp.csc_matrix(A, dtype=np.float64)
        A.sort_indices()
        self.m, self.n = A.shape
        self.indptr = np.ascontiguousarray(A.indptr, dtype=np.int64)
        self.indices = np.ascontiguousarray(A.indices, dtype=np.int64)
        self.data = np.ascontiguousarray(A.data, dtype=np.float64)
        self.A = A
        self.b = np.ascontiguousarray(b, dtype=np.float64)
        self.c = np.ascontiguousarray(c, dtype=np.float64)
        self._col_norms_1 = None

    def column(self, j):
        """Rows and values of column j, O(nnz_j)."""
        lo, hi = self.indptr[j], self.indptr[j + 1]
        return self.indices[lo:hi], self.data[lo:hi]

    @property
    def col_norms_1(self):
        """Per-column 1-norms ||a_j||_1 (cached)."""
        if self._col_norms_1 is None:
            self._col_norms_1 = np.asarray(
                np.abs(self.A).sum(axis=0)).ravel().astype(np.float64)
        return self._col_norms_1

    def drift_tolerance(self):
        """Allowed infinity-norm drift of the incremental A*x cache."""
        return 1e-8 * (1.0 + float(np.max(np.abs(self.b), initial=0.0)))

    def __repr__(self):
        return (f"StandardFormLP(m={self.m}, n={self.n}, "
                f"nnz={self.data.size})")


def validate(problem: StandardFormLP) -> None:
    """Check dimensional consistency and finiteness.

    Raises ``DimensionMismatch`` or ``NonFiniteEntry`` naming the first
    violation; returns None when the problem is well formed.
    """
    m, n = problem.m, problem.n
    if m < 1 or n < 1:
        raise DimensionMismatch(f"need m >= 1 and n >= 1, got m={m}, n={n}")
    if problem.b.ndim != 1 or problem.b.shape[0] != m:
        raise DimensionMismatch(
            f"b has shape {problem.b.shape}, expected ({m},)")
    if problem.c.ndim != 1 or problem.c.shape[0] != n:
        raise DimensionMismatch(
            f"c has shape {problem.c.shape}, expected ({n},)")
    for name, arr in (("A", problem.data), ("b", problem.b), ("c", problem.c)):
        bad = np.flatnonzero(~np.isfinite(arr))
        if bad.size:
            raise NonFiniteEntry(
                f"{name} contains a non-finite entry at position {bad[0]}")


@dataclass
class SolverParams:
    """Radii of the feasible boxes plus run controls.

    xi and eta must satisfy xi >= 2*||x*||_1 and eta >= 2*||y*||_inf for
    the optimality certificates to be meaningful; instance generators
    report those thresholds alongside the problem.
    """

    xi: float
    eta: float
    max_iters: int
    refresh_period: int = 1000
    screening_enabled: bool = False
    trace_every: int = 1
    tol: float = 1e-4

    def __post_init__(self):
        if not (self.xi > 0 and np.isfinite(self.xi)):
            raise ValueError(f"xi must be positive and finite, got {self.xi}")
        if not (self.eta > 0 and np.isfinite(self.eta)):
            raise ValueError(f"eta must be positive and finite, got {self.eta}")
        if self.max_iters < 0:
            raise ValueError("max_iters must be >= 0")
        if self.refresh_period < 1:
            raise ValueError("refresh_period must be >= 1")
        if self.trace_every < 1:
            raise ValueError("trace_every must be >= 1")


class SolverState:
    """Mutable per-run state shared by both algorithms.

    The primal iterate is stored factored as ``x = scale * x_hat`` so the
    multiplicative k/(k+1) decay costs O(1) per step and only the support
    of the step direction needs touching.  ``ax`` carries the
    incrementally maintained product A*x; ``refresh_cache`` recomputes it
    exactly and folds the scale factor back into ``x_hat``.

    ``r_last``/``s_last`` hold the most recent step directions; they are
    meaningful from iterate index k >= 2 on (zero before the first step).
    """

    __slots__ = ("k", "x_hat", "scale", "y", "ax", "r_last", "s_last")

    def __init__(self, k, x_hat, scale, y, ax, r_last, s_last):
        self.k = k
        self.x_hat = x_hat
        self.scale = scale
        self.y = y
        self.ax = ax
        self.r_last = r_last
        self.s_last = s_last

    @classmethod
    def initial(cls, problem: StandardFormLP, x0=None, y0=None) -> "SolverState":
        """State at iterate index 1: x1 := x0 (default 0), y1 := y0 (default 0)."""
        n, m = problem.n, problem.m
        x = np.zeros(n) if x0 is None else np.array(x0, dtype=np.float64)
        y = np.zeros(m) if y0 is None else np.array(y0, dtype=np.float64)
        if x.shape != (n,):
            raise DimensionMismatch(f"x0 has shape {x.shape}, expected ({n},)")
        if y.shape != (m,):
            raise DimensionMismatch(f"y0 has shape {y.shape}, expected ({m},)")
        ax = problem.A @ x
        return cls(1, x, 1.0, y, ax, np.zeros(n), np.zeros(m))

    @property
    def x(self) -> np.ndarray:
        """The materialized primal iterate scale * x_hat."""
        return self.scale * self.x_hat

    def copy(self) -> "SolverState":
        return SolverState(self.k, self.x_hat.copy(), self.scale,
                           self.y.copy(), self.ax.copy(),
                           self.r_last.copy(), self.s_last.copy())

    def drift(self, problem: StandardFormLP) -> float:
        """Infinity-norm gap between the cache and the exact product A*x."""
        exact = problem.A @ self.x
        return float(np.max(np.abs(self.ax - exact), initial=0.0))


def refresh_cache(state: SolverState, problem: StandardFormLP) -> SolverState:
    """Fold the scale factor into x_hat and recompute A*x exactly.

    Idempotent; called every ``refresh_period`` iterations to keep the
    incremental cache from accumulating floating-point drift.
    """
    if state.scale != 1.0:
        state.x_hat *= state.scale
        state.scale = 1.0
    state.ax = problem.A @ state.x_hat
    return state

"""Lazy screening of dual constraints.

Between iterations k0 < k1 every dual coordinate moves at most
2*eta/(t+1) at step t (both the direction and the iterate live in
[-eta, eta]), so the slack d_j = c_j - a_j'y drifts by at most

    drift_j(k0, k1) = ||a_j||_1 * 2*eta * (H(k1) - H(k0)),

with H the harmonic numbers.  A column whose slack sits ``gap`` above
the incumbent minimum therefore cannot become the minimizer before both
drift budgets together reach ``gap``; it can be put to sleep until that
computable wake iteration.  The same certificates answer the weaker
query "which columns might have negative slack", used by the perturbed
solver's projection.

Wake iterations are kept in a bucket-per-iteration queue, so advancing
one iteration pops exactly the columns that are due.
"""
from __future__ import annotations

import numpy as np

from fwlp import _kernels
from fwlp.model import LpError, SolverParams, StandardFormLP


class HarmonicTable:
    """Prefix sums H(t) = sum_{i<=t} 1/i, lazily extended."""

    def __init__(self, initial: int = 1024):
        self._extend_to(max(int(initial), 1))

    def _extend_to(self, t: int):
        existing = getattr(self, "_h", np.zeros(1))
        if t < existing.shape[0]:
            return
        start = existing.shape[0]
        tail = existing[-1] + np.cumsum(1.0 / np.arange(start, t + 1))
        self._h = np.concatenate([existing, tail])

    def value(self, t: int) -> float:
        self._extend_to(t)
        return float(self._h[t])

    def first_reaching(self, thresholds, lo: int, hi: int):
        """Smallest t with H(t) >= threshold, clamped to [lo, hi+1]."""
        self._extend_to(hi)
        t = np.searchsorted(self._h[: hi + 1], thresholds, side="left")
        return np.clip(t, lo, hi + 1)


class ScreeningState:
    """Per-run wake bookkeeping for one problem.

    A single instance serves one query kind per run: either
    ``refresh_and_select`` (certified argmin, for the unperturbed
    solver) or ``violated_superset`` (certified sign, for the perturbed
    solver's projection).  Queries must advance one iteration at a time,
    starting at k = 1 where every column is due.
    """

    def __init__(self, problem: StandardFormLP, params: SolverParams):
        n = problem.n
        self.col_norms = problem.col_norms_1
        self.d_snapshot = np.zeros(n)
        self.snapshot_iter = np.zeros(n, dtype=np.int64)
        self.wake_iter = np.ones(n, dtype=np.int64)
        self.touch_counter = 0
        self.eta = float(params.eta)
        self.max_iters = int(params.max_iters)
        self.last_examined = np.arange(n, dtype=np.int64)
        self._buckets: dict[int, list] = {1: list(range(n))}
        self._harmonic = HarmonicTable(min(self.max_iters + 2, 1 << 20))
        self._mode = None
        self._next_k = 1

    # -- certified drift bounds ------------------------------------------

    def drift_bound(self, j: int, from_iter: int, to_iter: int) -> float:
        """Upper bound on |d_j(to_iter) - d_j(from_iter)|."""
        if not 1 <= from_iter <= to_iter:
            raise LpError(f"need 1 <= from_iter <= to_iter, got "
                          f"{from_iter}, {to_iter}")
        h = self._harmonic
        return 2.0 * self.eta * float(self.col_norms[j]) \
            * (h.value(to_iter) - h.value(from_iter))

    def compute_wake(self, j: int, gap: float, k: int, l_min_col: float) -> int:
        """Earliest iteration > k at which column j could reach the
        incumbent: both drift budgets together must cover ``gap``."""
        if gap <= 0.0:
            return k + 1
        factor = 2.0 * self.eta * (float(self.col_norms[j]) + l_min_col)
        if factor <= 0.0:
            return self.max_iters + 1
        threshold = self._harmonic.value(k) + gap / factor
        t = int(self._harmonic.first_reaching(threshold, k + 1, self.max_iters))
        return t

    # -- queries -----------------------------------------------------------

    def _due(self, k: int, mode: str) -> np.ndarray:
        if self._mode is None:
            self._mode = mode
        elif self._mode != mode:
            raise LpError("a ScreeningState serves one query kind per run")
        if k != self._next_k:
            raise LpError(f"screening advances one iteration at a time; "
                          f"expected k={self._next_k}, got {k}")
        self._next_k = k + 1
        due = self._buckets.pop(k, [])
        due.sort()
        return np.asarray(due, dtype=np.int64)

    def _evaluate(self, cols: np.ndarray, y, k: int, problem: StandardFormLP):
        vals = _kernels.eval_columns(problem.indptr, problem.indices,
                                     problem.data, problem.c, y, cols)
        self.touch_counter += cols.shape[0]
        self.last_examined = cols
        self.d_snapshot[cols] = vals
        self.snapshot_iter[cols] = k
        return vals

    def _sleep(self, cols, gaps, k, l_min_col):
        """Vectorized compute_wake + rebucketing for examined columns."""
        factor = 2.0 * self.eta * (self.col_norms[cols] + l_min_col)
        wakes = np.full(cols.shape[0], k + 1, dtype=np.int64)
        pos = (gaps > 0.0) & (factor > 0.0)
        never = (gaps > 0.0) & (factor <= 0.0)
        wakes[never] = self.max_iters + 1
        if pos.any():
            thresholds = self._harmonic.value(k) + gaps[pos] / factor[pos]
            wakes[pos] = self._harmonic.first_reaching(
                thresholds, k + 1, self.max_iters)
        self.wake_iter[cols] = wakes
        for j, wk in zip(cols.tolist(), wakes.tolist()):
            self._buckets.setdefault(wk, []).append(j)

    def refresh_and_select(self, y, k: int, problem: StandardFormLP):
        """Certified most-violated dual constraint at iteration k.

        Evaluates only the due columns, returns ``(i, d_i)`` equal to the
        dense argmin (lowest index on ties), and re-arms wake iterations
        for the examined non-minimizing columns.
        """
        cols = self._due(k, "argmin")
        vals = self._evaluate(cols, y, k, problem)
        t = int(np.argmin(vals))
        i, d_min = int(cols[t]), float(vals[t])
        self._sleep(cols, vals - d_min, k, float(self.col_norms[i]))
        return i, d_min

    def violated_superset(self, y, k: int, problem: StandardFormLP) -> np.ndarray:
        """Certified superset of {j : d_j(k) < 0}; every column not
        returned is certified nonnegative by its drift bound."""
        cols, vals = self.violated_with_values(y, k, problem)
        return cols

    def violated_with_values(self, y, k: int, problem: StandardFormLP):
        """Like ``violated_superset`` but also returns the slack values."""
        cols = self._due(k, "violation")
        vals = self._evaluate(cols, y, k, problem)
        # positivity horizon: only the column's own drift budget matters
        self._sleep(cols, vals, k, 0.0)
        neg = vals < 0.0
        return cols[neg], vals[neg]

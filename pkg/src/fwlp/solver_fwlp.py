"""Unperturbed primal-dual Frank-Wolfe solver (FWLP).

Each step picks the most violated dual constraint i = argmin_j
(c - A'y_k)_j, moves x toward the vertex xi*e_i of the capped simplex
when that slack is negative (toward 0 otherwise), then moves y toward
eta * sgn(b - A x_{k+1}), everything with step size 1/(k+1).  Only one
column of A is touched by the primal update; the argmin itself is either
a dense scan or a certified screened scan.

No convergence guarantee exists for this variant; traces carry the same
diagnostics as the perturbed solver for monitoring only.
"""
from __future__ import annotations

import math

import numpy as np

from fwlp import _kernels
from fwlp._driver import SolveResult, StepCapture, run_loop
from fwlp.model import (SolverParams, SolverState, StandardFormLP,
                        refresh_cache)
from fwlp.screening import ScreeningState

_NAN = float("nan")


def most_violated_index(d) -> tuple[int, float]:
    """Smallest index attaining the minimum of d, and that minimum."""
    d = np.asarray(d)
    i = int(np.argmin(d))
    return i, float(d[i])


def _select_dense(problem, y):
    cols = np.arange(problem.n, dtype=np.int64)
    d = _kernels.eval_columns(problem.indptr, problem.indices, problem.data,
                              problem.c, y, cols)
    i, d_i = most_violated_index(d)
    return i, d_i, d


def _r_prev_dot(state, problem, d_dense):
    """r_k'(c - A'y_k) plus ||r_k||^2 for the previous direction."""
    prev_idx = np.flatnonzero(state.r_last)
    if prev_idx.size == 0:
        return 0.0, 0.0, 0
    if d_dense is not None:
        vals = d_dense[prev_idx]
        touches = 0
    else:
        vals = _kernels.eval_columns(problem.indptr, problem.indices,
                                     problem.data, problem.c, state.y,
                                     prev_idx.astype(np.int64))
        touches = prev_idx.size
    rvals = state.r_last[prev_idx]
    return float(rvals @ vals), float(rvals @ rvals), touches


class _FwlpStepper:
    def __init__(self, problem: StandardFormLP, params: SolverParams,
                 screening: ScreeningState | None = None):
        self.problem = problem
        self.params = params
        self.screening = screening

    def _measure(self, state, d_i, l, rg, rsq, d_dense):
        problem, params = self.problem, self.params
        k = state.k
        resid = problem.b - state.ax
        pinf = float(np.abs(resid).sum())
        gap = state.scale * float(problem.c @ state.x_hat) \
            - float(problem.b @ state.y)
        M = params.eta * pinf + gap + params.xi * l
        if k >= 2:
            rk = math.sqrt(k)
            U = (-rg - rsq / (2 * rk)
                 + float(state.s_last @ resid)
                 - float(state.s_last @ state.s_last) / (2 * rk) + gap)
            rlg, rlsq, extra = _r_prev_dot(state, problem, d_dense)
            delta = (rg + rsq / (2 * rk) - rlg
                     - (k - 1) / (2 * k * math.sqrt(k - 1)) * rlsq)
        else:
            U, delta, extra = _NAN, _NAN, 0
        return resid, pinf, gap, M, U, delta, extra

    def step_ex(self, state: SolverState) -> StepCapture:
        problem, params = self.problem, self.params
        k = state.k
        snapshot = state.copy()
        if self.screening is not None:
            i, d_i = self.screening.refresh_and_select(state.y, k, problem)
            touches = self.screening.last_examined.shape[0]
            d_dense = None
        else:
            i, d_i, d_dense = _select_dense(problem, state.y)
            touches = problem.n
        l = max(0.0, -d_i)
        stepped = d_i < 0.0
        rg = params.xi * d_i if stepped else 0.0
        rsq = params.xi ** 2 if stepped else 0.0
        resid, pinf, gap, M, U, delta, extra = self._measure(
            state, d_i, l, rg, rsq, d_dense)
        touches += extra

        # primal update: x_{k+1} = k/(k+1) x_k [+ xi/(k+1) e_i]
        fac = k / (k + 1.0)
        old_scale = state.scale
        state.scale *= fac
        state.ax *= fac
        if stepped:
            state.x_hat[i] += params.xi / (k * old_scale)
            rows, vals = problem.column(i)
            state.ax[rows] += vals * (params.xi / (k + 1.0))
        # dual update: y_{k+1} = k/(k+1) y_k + eta/(k+1) sgn(b - A x_{k+1})
        s_new = params.eta * np.sign(problem.b - state.ax)
        state.y *= fac
        state.y += s_new / (k + 1.0)

        if k >= 2:
            eps_next = float(k / (k + 1.0) * (
                -(s_new @ resid)
                + math.sqrt(k + 1) / (2 * k) * (s_new @ s_new)
                + state.s_last @ resid
                - (state.s_last @ state.s_last) / (2 * math.sqrt(k))))
        else:
            eps_next = _NAN

        prev_idx = np.flatnonzero(state.r_last)
        state.r_last[prev_idx] = 0.0
        if stepped:
            state.r_last[i] = params.xi
        state.s_last = s_new
        state.k = k + 1
        if (k + 1) % params.refresh_period == 0:
            refresh_cache(state, problem)
        return StepCapture(k, snapshot, U, delta, eps_next, pinf, l, gap, M,
                           touches, selected_index=i)

    def span(self, state: SolverState, nsteps: int) -> int:
        touches = 0
        for _ in range(nsteps):
            touches += self.step_ex(state).touches
        return touches

    def probe(self, state: SolverState) -> StepCapture:
        """Measure at the current iterate without advancing (dense scan)."""
        problem, params = self.problem, self.params
        k = state.k
        i, d_i, d_dense = _select_dense(problem, state.y)
        l = max(0.0, -d_i)
        stepped = d_i < 0.0
        rg = params.xi * d_i if stepped else 0.0
        rsq = params.xi ** 2 if stepped else 0.0
        _, pinf, gap, M, U, delta, extra = self._measure(
            state, d_i, l, rg, rsq, d_dense)
        return StepCapture(k, state, U, delta, _NAN, pinf, l, gap, M,
                           problem.n + extra, selected_index=i)


def fwlp_step(state: SolverState, problem: StandardFormLP,
              params: SolverParams,
              screening: ScreeningState | None = None) -> SolverState:
    """Advance one closed-form step; mutates and returns ``state``."""
    _FwlpStepper(problem, params, screening).step_ex(state)
    return state


def run_fwlp(problem: StandardFormLP, params: SolverParams,
             x0=None, y0=None) -> SolveResult:
    """Run up to ``params.max_iters`` steps with periodic diagnostics.

    Stops early when primal infeasibility, dual infeasibility and |gap|
    all fall below ``params.tol`` at a traced iterate.
    """
    screening = ScreeningState(problem, params) \
        if params.screening_enabled else None
    return run_loop(problem, params, x0, y0,
                    _FwlpStepper(problem, params, screening))

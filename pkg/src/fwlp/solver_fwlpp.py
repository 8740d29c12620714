"""Perturbed primal-dual Frank-Wolfe solver (FWLP-P).

The quadratic perturbation ||.||^2/(2 sqrt k) turns both subproblems
into Euclidean projections,

    r_{k+1} = proj onto capped simplex of  sqrt(k) (A'y_k - c),
    s_{k+1} = componentwise clamp of       sqrt(k) (b - A x_{k+1}),

followed by the usual 1/(k+1) convex-combination updates.  The primal
direction is supported only on columns with negative dual slack, so the
incremental A*x cache update touches only those columns; with screening
enabled the slack vector itself is only materialized on a certified
superset of the negative entries.

Uninstrumented stretches between trace points run through the kernel
backend; the steps around each trace point run in Python to assemble
complete diagnostics records.
"""
from __future__ import annotations

import math

import numpy as np

from fwlp import _kernels
from fwlp._driver import SolveResult, StepCapture, run_loop
from fwlp.model import (SolverParams, SolverState, StandardFormLP,
                        refresh_cache)
from fwlp.projection import project_box, project_simplex_cap
from fwlp.screening import ScreeningState

_NAN = float("nan")


def compute_r(y, k: int, problem: StandardFormLP,
              params: SolverParams) -> np.ndarray:
    """Primal direction r_{k+1}: the projection of sqrt(k)(A'y - c)
    onto {r >= 0, e'r <= xi}."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    w0 = math.sqrt(k) * (problem.A.T @ y - problem.c)
    return project_simplex_cap(w0, params.xi)


def compute_s(x_next, k: int, problem: StandardFormLP,
              params: SolverParams) -> np.ndarray:
    """Dual direction s_{k+1}: sqrt(k)(b - A x_{k+1}) clamped to the box."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return project_box(math.sqrt(k) * (problem.b - problem.A @ x_next),
                       params.eta)


class _FwlppStepper:
    def __init__(self, problem: StandardFormLP, params: SolverParams,
                 screening: ScreeningState | None = None):
        self.problem = problem
        self.params = params
        self.screening = screening

    def _direction(self, state, k):
        """(supp, rvals, rg, rsq, l, touches) for the step at index k.

        rg = r'(c - A'y), rsq = ||r||^2; the dense path materializes the
        full slack vector, the screened path only a certified superset of
        its negative entries.
        """
        problem, params = self.problem, self.params
        rk = math.sqrt(k)
        if self.screening is not None:
            viol, viol_d = self.screening.violated_with_values(
                state.y, k, problem)
            touches = self.screening.last_examined.shape[0]
            l = max(0.0, -float(viol_d.min())) if viol.shape[0] else 0.0
            if viol.shape[0]:
                w_sub = np.ascontiguousarray((-rk / params.xi) * viol_d)
                xu, _, supp_sub = _kernels.unit_cap_project(w_sub)
                rvals = params.xi * xu[supp_sub]
                supp = viol[supp_sub]
                rg = float(rvals @ viol_d[supp_sub])
            else:
                supp = np.zeros(0, dtype=np.int64)
                rvals = np.zeros(0)
                rg = 0.0
            rsq = float(rvals @ rvals)
            return supp, rvals, rg, rsq, l, touches, None
        g = problem.c - problem.A.T @ state.y
        xu, _, supp = _kernels.unit_cap_project(
            np.ascontiguousarray((-rk / params.xi) * g))
        rvals = params.xi * xu[supp]
        rg = float(rvals @ g[supp])
        rsq = float(rvals @ rvals)
        l = max(0.0, -float(g.min(initial=0.0)))
        return supp, rvals, rg, rsq, l, problem.n, g

    def _r_prev_terms(self, state, g):
        prev_idx = np.flatnonzero(state.r_last)
        if prev_idx.size == 0:
            return 0.0, 0.0, 0
        rvals = state.r_last[prev_idx]
        if g is not None:
            return float(rvals @ g[prev_idx]), float(rvals @ rvals), 0
        vals = _kernels.eval_columns(self.problem.indptr, self.problem.indices,
                                     self.problem.data, self.problem.c,
                                     state.y, prev_idx.astype(np.int64))
        return float(rvals @ vals), float(rvals @ rvals), prev_idx.size

    def step_ex(self, state: SolverState) -> StepCapture:
        problem, params = self.problem, self.params
        k = state.k
        snapshot = state.copy()
        supp, rvals, rg, rsq, l, touches, g = self._direction(state, k)

        resid = problem.b - state.ax
        pinf = float(np.abs(resid).sum())
        gap = state.scale * float(problem.c @ state.x_hat) \
            - float(problem.b @ state.y)
        M = params.eta * pinf + gap + params.xi * l
        if k >= 2:
            rk = math.sqrt(k)
            U = (-rg - rsq / (2 * rk) + float(state.s_last @ resid)
                 - float(state.s_last @ state.s_last) / (2 * rk) + gap)
            rlg, rlsq, extra = self._r_prev_terms(state, g)
            touches += extra
            delta = (rg + rsq / (2 * rk) - rlg
                     - (k - 1) / (2 * k * math.sqrt(k - 1)) * rlsq)
        else:
            U, delta = _NAN, _NAN

        # x_{k+1} = k/(k+1) x_k + 1/(k+1) r_{k+1}, cache touched on supp only
        fac = k / (k + 1.0)
        old_scale = state.scale
        state.scale *= fac
        state.ax *= fac
        coef = 1.0 / (k + 1.0)
        if supp.shape[0]:
            state.x_hat[supp] += rvals / (k * old_scale)
            for t in range(supp.shape[0]):
                rows, vals = problem.column(int(supp[t]))
                state.ax[rows] += vals * (rvals[t] * coef)
        s_new = np.clip(math.sqrt(k) * (problem.b - state.ax),
                        -params.eta, params.eta)
        state.y *= fac
        state.y += coef * s_new

        if k >= 2:
            eps_next = float(k / (k + 1.0) * (
                -(s_new @ resid)
                + math.sqrt(k + 1) / (2 * k) * (s_new @ s_new)
                + state.s_last @ resid
                - (state.s_last @ state.s_last) / (2 * math.sqrt(k))))
        else:
            eps_next = _NAN

        r_new = np.zeros(problem.n)
        r_new[supp] = rvals
        state.r_last = r_new
        state.s_last = s_new
        state.k = k + 1
        if (k + 1) % params.refresh_period == 0:
            refresh_cache(state, problem)
        return StepCapture(k, snapshot, U, delta, eps_next, pinf, l, gap, M,
                           touches)

    def span(self, state: SolverState, nsteps: int) -> int:
        if self.screening is not None:
            touches = 0
            for _ in range(nsteps):
                touches += self.step_ex(state).touches
            return touches
        problem, params = self.problem, self.params
        state.scale = _kernels.fwlpp_run_span(
            problem.indptr, problem.indices, problem.data, problem.b,
            problem.c, state.x_hat, state.y, state.ax, state.scale,
            state.k, nsteps, params.xi, params.eta, params.refresh_period,
            state.r_last, state.s_last)
        state.k += nsteps
        return nsteps * problem.n

    def probe(self, state: SolverState) -> StepCapture:
        """Measure at the current iterate without advancing (dense scan)."""
        problem, params = self.problem, self.params
        k = state.k
        g = problem.c - problem.A.T @ state.y
        resid = problem.b - state.ax
        pinf = float(np.abs(resid).sum())
        gap = state.scale * float(problem.c @ state.x_hat) \
            - float(problem.b @ state.y)
        l = max(0.0, -float(g.min(initial=0.0)))
        M = params.eta * pinf + gap + params.xi * l
        if k >= 2:
            rk = math.sqrt(k)
            xu, _, supp = _kernels.unit_cap_project(
                np.ascontiguousarray((-rk / params.xi) * g))
            rvals = params.xi * xu[supp]
            rg = float(rvals @ g[supp])
            rsq = float(rvals @ rvals)
            U = (-rg - rsq / (2 * rk) + float(state.s_last @ resid)
                 - float(state.s_last @ state.s_last) / (2 * rk) + gap)
            rlg, rlsq, _ = self._r_prev_terms(state, g)
            delta = (rg + rsq / (2 * rk) - rlg
                     - (k - 1) / (2 * k * math.sqrt(k - 1)) * rlsq)
        else:
            U, delta = _NAN, _NAN
        return StepCapture(k, state, U, delta, _NAN, pinf, l, gap, M,
                           problem.n)


def fwlpp_step(state: SolverState, problem: StandardFormLP,
               params: SolverParams,
               screening: ScreeningState | None = None) -> SolverState:
    """Advance one perturbed step; mutates and returns ``state``."""
    _FwlppStepper(problem, params, screening).step_ex(state)
    return state


def run_fwlpp(problem: StandardFormLP, params: SolverParams,
              x0=None, y0=None) -> SolveResult:
    """Run up to ``params.max_iters`` perturbed steps with diagnostics.

    Stops early when primal infeasibility, dual infeasibility and |gap|
    all fall below ``params.tol`` at a traced iterate.
    """
    screening = ScreeningState(problem, params) \
        if params.screening_enabled else None
    return run_loop(problem, params, x0, y0,
                    _FwlppStepper(problem, params, screening))

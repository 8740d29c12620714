"""Shared run loop for both solvers: trace scheduling, the one-step
look-ahead needed to complete diagnostics records, and early stopping.

A full record at iterate t needs quantities from steps t-1 and t (the
potential uses the direction computed *during* the step, the dual
perturbation term is only known once the following dual direction
exists), so the loop runs those two steps through the instrumented
Python path and lets the stepper fast-forward in between.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

from fwlp.diagnostics import DiagnosticsRecord
from fwlp.model import SolverParams, SolverState, StandardFormLP, validate


@dataclass
class StepCapture:
    """Quantities measured at iterate index k while stepping to k+1.

    ``U``/``delta`` are NaN for k < 2 and ``eps_next`` for k < 2 as well
    (the dual perturbation needs a previous dual direction).
    ``selected_index`` is the chosen argmin column for closed-form steps
    (-1 where no single column is selected).
    """

    k: int
    snapshot: SolverState
    U: float
    delta: float
    eps_next: float
    primal_infeas: float
    dual_infeas: float
    gap: float
    M: float
    touches: int
    selected_index: int = -1


@dataclass
class SolveResult:
    """Trace plus final state; ``converged`` means the stopping measures
    fell below ``params.tol`` at a traced iterate.  ``wall_times_ns``
    aligns with ``trace`` and holds elapsed time since the run started."""

    trace: list
    state: SolverState
    converged: bool
    iterations: int
    wall_times_ns: list = field(default_factory=list)

    @property
    def records(self):
        return [rec for _, rec in self.trace]


def _fin(v: float) -> float:
    return 0.0 if v is None or math.isnan(v) else float(v)


def _build_record(t: int, cap_prev: StepCapture | None, cap: StepCapture,
                  touch_total: int) -> DiagnosticsRecord:
    U = _fin(cap.U)
    delta = _fin(cap.delta)
    epsilon = _fin(cap_prev.eps_next) if cap_prev is not None else 0.0
    defined = (cap_prev is not None and not math.isnan(cap.U)
               and not math.isnan(cap_prev.U)
               and not math.isnan(cap_prev.eps_next))
    residual = (delta + epsilon + U - (t - 1) / float(t) * cap_prev.U
                if defined else 0.0)
    return DiagnosticsRecord(
        k=t, U=U, delta=delta, epsilon=epsilon, recursion_residual=residual,
        primal_infeas=cap.primal_infeas, dual_infeas=cap.dual_infeas,
        gap=cap.gap, M=cap.M, touch_count=touch_total)


def _below_tol(rec: DiagnosticsRecord, params: SolverParams) -> bool:
    return max(rec.primal_infeas, rec.dual_infeas, abs(rec.gap)) <= params.tol


def run_loop(problem: StandardFormLP, params: SolverParams, x0, y0,
             stepper) -> SolveResult:
    """Drive ``stepper`` for up to ``params.max_iters`` steps.

    The stepper contract:
      * ``step_ex(state) -> StepCapture`` advances one iteration,
      * ``span(state, nsteps) -> touches`` fast-forwards (no captures),
      * ``probe(state) -> StepCapture`` measures without advancing.
    """
    validate(problem)
    state = SolverState.initial(problem, x0, y0)
    T = params.max_iters + 1
    targets = {1, T} | {t for t in range(2, T + 1)
                        if (t - 1) % params.trace_every == 0}
    instr = {min(t - 1, params.max_iters) for t in targets if t >= 2}
    instr |= {t for t in targets if 2 <= t <= params.max_iters}
    instr_sorted = sorted(instr)

    t0 = time.monotonic_ns()
    touch_total = 0
    trace = []
    times = []

    cap0 = stepper.probe(state)
    touch_total += cap0.touches
    rec0 = _build_record(1, None, cap0, touch_total)
    trace.append((state.copy(), rec0))
    times.append(time.monotonic_ns() - t0)
    converged = _below_tol(rec0, params)
    if converged or params.max_iters == 0:
        return SolveResult(trace, state, converged, 0, times)

    captures: dict[int, StepCapture] = {}
    pos = 0
    k = 1
    while k <= params.max_iters:
        while pos < len(instr_sorted) and instr_sorted[pos] < k:
            pos += 1
        next_instr = instr_sorted[pos] if pos < len(instr_sorted) \
            else params.max_iters + 1
        if k < next_instr:
            span = min(next_instr, params.max_iters + 1) - k
            touch_total += stepper.span(state, span)
            k += span
            continue
        cap = stepper.step_ex(state)
        touch_total += cap.touches
        captures[k] = cap
        captures.pop(k - 2, None)
        if k in targets and k >= 2:
            rec = _build_record(k, captures.get(k - 1), cap, touch_total)
            trace.append((cap.snapshot, rec))
            times.append(time.monotonic_ns() - t0)
            if _below_tol(rec, params):
                return SolveResult(trace, state, True, k, times)
        k += 1

    cap_final = stepper.probe(state)
    touch_total += cap_final.touches
    rec = _build_record(T, captures.get(T - 1), cap_final, touch_total)
    trace.append((state.copy(), rec))
    times.append(time.monotonic_ns() - t0)
    return SolveResult(trace, state, _below_tol(rec, params),
                       params.max_iters, times)

"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines.
The perturbed-solver diagnostic runs (criteria 2-4, 6, 9) share one set
of twenty 10x20 instances; the rate criterion runs three instances for
a million iterations each.
"""
import math

import numpy as np
import pytest

from fwlp import _kernels
from fwlp.diagnostics import (certificate_check, data_constants,
                              delta_lower_bound, envelope_bound,
                              epsilon_lower_bound)
from fwlp.generate import generate_instance
from fwlp.model import SolverParams, SolverState, StandardFormLP
from fwlp.projection import brute_force_unit_cap, kkt_unit_cap
from fwlp.screening import ScreeningState
from fwlp.solver_fwlp import _FwlpStepper, run_fwlp
from fwlp.solver_fwlpp import run_fwlpp


def _report(name, ok, detail=""):
    print(f"[acceptance] {name}: {'PASS' if ok else 'FAIL'}"
          f"{' (' + detail + ')' if detail else ''}")
    assert ok, f"{name}: {detail}"


# ---------------------------------------------------------------- fixtures

@pytest.fixture(scope="module")
def diag_runs():
    """Twenty 10x20 instances, 1000 perturbed steps, every iterate traced."""
    runs = []
    for seed in range(20):
        inst = generate_instance(seed, 10, 20, density=0.5)
        params = SolverParams(xi=inst.xi_min, eta=inst.eta_min,
                              max_iters=1000, trace_every=1, tol=0.0)
        res = run_fwlpp(inst.problem, params)
        runs.append((inst, params, res))
    return runs


@pytest.fixture(scope="module")
def rate_runs():
    """Three instances run for a million perturbed steps."""
    runs = []
    for seed in (101, 202, 303):
        inst = generate_instance(seed, 10, 20, density=0.5)
        params = SolverParams(xi=inst.xi_min, eta=inst.eta_min,
                              max_iters=1_000_000, trace_every=1000, tol=0.0)
        res = run_fwlpp(inst.problem, params)
        runs.append((inst, params, res))
    return runs


# ---------------------------------------------------------------- criteria

def test_01_projection_oracle_equivalence():
    rng = np.random.default_rng(2024)
    worst_gap = 0.0
    worst_res = 0.0
    for n in range(1, 9):
        scales = rng.choice([0.2, 1.0, 5.0], size=10_000)
        for t in range(10_000):
            w = rng.normal(size=n) * scales[t]
            sol = kkt_unit_cap(w)
            ref = brute_force_unit_cap(w)
            worst_gap = max(worst_gap, float(np.max(np.abs(sol.x - ref))))
            worst_res = max(worst_res, max(sol.residuals(w).values()))
    ok = worst_gap <= 1e-10 and worst_res <= 1e-12
    _report("01 projection oracle equivalence", ok,
            f"max |x - oracle| = {worst_gap:.2e}, "
            f"max KKT residual = {worst_res:.2e}")


def test_02_recursion_identity(diag_runs):
    worst = 0.0
    count = 0
    for inst, params, res in diag_runs:
        recs = {rec.k: rec for rec in res.records}
        for k in range(3, 1002):
            rel = abs(recs[k].recursion_residual) / (1 + abs(recs[k - 1].U))
            worst = max(worst, rel)
            count += rel > 1e-8
    _report("02 recursion identity", count == 0,
            f"max relative residual = {worst:.2e} over 20 runs x 1000 steps")


def test_03_potential_envelope(diag_runs):
    violations = 0
    for inst, params, res in diag_runs:
        recs = {rec.k: rec for rec in res.records}
        _, Dbar = data_constants(inst.problem, params)
        F = envelope_bound(recs[2].U, Dbar)
        for k in range(3, 1002):
            if recs[k].U > F / math.sqrt(k - 1):
                violations += 1
    _report("03 potential envelope", violations == 0,
            f"{violations} violations of U_k <= F/sqrt(k-1)")


def test_04_perturbation_floors(diag_runs):
    viol_eps = viol_delta = 0
    for inst, params, res in diag_runs:
        m = inst.problem.m
        _, Dbar = data_constants(inst.problem, params)
        for rec in res.records:
            if rec.k >= 3 and rec.epsilon < epsilon_lower_bound(
                    rec.k - 1, m, params.eta):
                viol_eps += 1
            if rec.k >= 2 and rec.delta < delta_lower_bound(rec.k - 1, Dbar):
                viol_delta += 1
    _report("04 perturbation-term floors", viol_eps == 0 and viol_delta == 0,
            f"{viol_eps} epsilon and {viol_delta} delta floor violations")


def test_05_convergence_rate(rate_runs):
    slopes = []
    for inst, params, res in rate_runs:
        ks, vals = [], []
        for rec in res.records:
            if 10_000 <= rec.k <= 1_000_000:
                ks.append(rec.k)
                vals.append(max(rec.primal_infeas, rec.dual_infeas,
                                abs(rec.gap)))
        slope = np.polyfit(np.log(ks),
                           np.log(np.maximum(vals, 1e-300)), 1)[0]
        slopes.append(float(slope))
    ok = all(-1.1 <= s <= -0.35 for s in slopes)
    _report("05 O(1/sqrt k) convergence rate", ok,
            "slopes = " + ", ".join(f"{s:.3f}" for s in slopes))


def test_06_proof_form_certificate(diag_runs):
    failures = 0
    for inst, params, res in diag_runs:
        dims = (inst.problem.m, inst.problem.n)
        for st, rec in res.trace:
            if rec.k >= 2:
                rep = certificate_check(rec, params, dims, x=st.x)
                failures += not rep.ok
    _report("06 proof-form certificate", failures == 0,
            f"{failures} failing records out of 20 runs x 1000 iterates")


def test_07_screening_exactness():
    rng = np.random.default_rng(7)
    idx_mismatch = 0
    worst_state_gap = 0.0
    mask_events = 0
    for trial in range(10):
        m = int(rng.integers(4, 13))
        n = int(rng.integers(m + 5, 31))
        inst = generate_instance(1000 + trial, m, n, density=0.5)
        params = SolverParams(xi=inst.xi_min, eta=inst.eta_min,
                              max_iters=10_000)
        dense = _FwlpStepper(inst.problem, params, None)
        scr_state = ScreeningState(inst.problem, params)
        screened = _FwlpStepper(inst.problem, params, scr_state)
        sd = SolverState.initial(inst.problem)
        ss = SolverState.initial(inst.problem)
        all_cols = np.arange(n, dtype=np.int64)
        for k in range(1, 10_001):
            d_oracle = _kernels.eval_columns(
                inst.problem.indptr, inst.problem.indices, inst.problem.data,
                inst.problem.c, ss.y, all_cols)
            cap_d = dense.step_ex(sd)
            cap_s = screened.step_ex(ss)
            if cap_d.selected_index != cap_s.selected_index:
                idx_mismatch += 1
            # replayed sleep certificates must never mask the argmin
            asleep = np.setdiff1d(all_cols, scr_state.last_examined,
                                  assume_unique=False)
            if asleep.size and \
                    d_oracle[asleep].min() <= d_oracle[cap_s.selected_index]:
                mask_events += 1
        worst_state_gap = max(
            worst_state_gap,
            float(np.max(np.abs(sd.x - ss.x))),
            float(np.max(np.abs(sd.y - ss.y))))
    ok = idx_mismatch == 0 and mask_events == 0 and worst_state_gap <= 1e-12
    _report("07 screening exactness", ok,
            f"{idx_mismatch} index mismatches, {mask_events} masked argmins, "
            f"max iterate gap = {worst_state_gap:.2e}")


def test_08_screening_cost_claim():
    rng = np.random.default_rng(8)
    m, n = 5, 10_000
    cols = np.arange(n)
    rows = cols % m
    vals = np.ones(n)
    import scipy.sparse as sp
    A = sp.coo_matrix((vals, (rows, cols)), shape=(m, n)).tocsc()
    c = np.concatenate([np.zeros(10), rng.uniform(5.0, 10.0, n - 10)])
    b = np.ones(m)  # = A @ x* with x* = e_0 + ... + e_4
    problem = StandardFormLP(A, b, c)
    params = SolverParams(xi=10.0, eta=1.0, max_iters=10_000,
                          trace_every=1000, tol=0.0, screening_enabled=True)
    res = run_fwlp(problem, params)
    recs = {rec.k: rec for rec in res.records}
    touches = recs[10_001].touch_count - recs[1001].touch_count
    avg = touches / 9000.0
    _report("08 screening cost claim", avg < 0.1 * n,
            f"avg column touches/iter over k in [1e3, 1e4] = {avg:.2f} "
            f"(bound {0.1 * n:.0f})")


def test_09_gap_relation(diag_runs):
    violations = 0
    worst = -np.inf
    for inst, params, res in diag_runs:
        m = inst.problem.m
        base = m * params.eta ** 2 + params.xi ** 2
        recs = {rec.k: rec for rec in res.records}
        C = max(0.0, (abs(recs[10].M - recs[10].U) - base / (2 * 3.0))
                * 10 ** 1.5)
        slack = 1e-9 * (1 + base)
        for k in range(10, 1002):
            bound = base / (2 * math.sqrt(k - 1)) + C * k ** -1.5
            excess = abs(recs[k].M - recs[k].U) - bound
            worst = max(worst, excess)
            violations += excess > slack
    _report("09 saddle-gap vs potential relation", violations == 0,
            f"{violations} violations, worst excess = {worst:.2e}")


def test_10_fwlp_smoke():
    problem = StandardFormLP([[1.0]], [1.0], [1.0])
    params = SolverParams(xi=2.0, eta=2.0, max_iters=100_000,
                          trace_every=10_000, tol=0.0)
    res = run_fwlp(problem, params)
    final = res.trace[-1][1]
    ok = final.primal_infeas <= 0.05 and abs(final.gap) <= 0.1
    _report("10 closed-form solver smoke regression", ok,
            f"primal infeas = {final.primal_infeas:.4f}, "
            f"|gap| = {abs(final.gap):.4f} after 1e5 iterations")

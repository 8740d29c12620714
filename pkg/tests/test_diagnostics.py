import math

import numpy as np
import pytest

from fwlp.diagnostics import (DiagnosticsRecord, IndexTooSmall,
                              certificate_check, data_constants, delta_term,
                              dual_infeasibility, epsilon_term, potential,
                              recursion_residual, standard_gap)
from fwlp.generate import generate_instance
from fwlp.model import SolverParams, StandardFormLP
from fwlp.solver_fwlpp import compute_r, run_fwlpp


def one_by_one():
    return StandardFormLP([[1.0]], [1.0], [1.0])


def test_potential_hand_value_on_1x1():
    # x2=0, y2=0.5, s2=1, r3=0: U2 = 1 - 1/(2 sqrt 2) - 0.5
    p = one_by_one()
    U2 = potential(np.array([0.0]), np.array([0.5]), np.array([0.0]),
                   np.array([1.0]), 2, p)
    assert U2 == pytest.approx(1 - 1 / (2 * math.sqrt(2)) - 0.5, abs=1e-14)


def test_potential_zero_at_optimum():
    inst = generate_instance(1, 7, 16, density=0.5)
    z = np.zeros(inst.problem.n)
    U = potential(inst.x_star, inst.y_star, z, np.zeros(inst.problem.m),
                  5, inst.problem)
    assert U == pytest.approx(0.0, abs=1e-10)


def test_potential_reduces_to_gap_without_directions():
    inst = generate_instance(2, 5, 12, density=0.5)
    rng = np.random.default_rng(0)
    x = rng.uniform(0, 1, inst.problem.n)
    y = rng.normal(size=inst.problem.m)
    U = potential(x, y, np.zeros(inst.problem.n), np.zeros(inst.problem.m),
                  3, inst.problem)
    gap = float(inst.problem.c @ x - inst.problem.b @ y)
    assert U == pytest.approx(gap, abs=1e-12)


def test_potential_index_guard():
    with pytest.raises(IndexTooSmall):
        potential(np.zeros(1), np.zeros(1), np.zeros(1), np.zeros(1), 1,
                  one_by_one())
    with pytest.raises(IndexTooSmall):
        epsilon_term(np.zeros(1), np.zeros(1), np.zeros(1), 1, one_by_one())


def test_delta_epsilon_zero_for_zero_directions():
    p = one_by_one()
    z = np.zeros(1)
    assert delta_term(z, z, np.array([0.3]), 4, p) == 0.0
    assert epsilon_term(z, z, np.array([0.2]), 4, p) == 0.0


def test_epsilon_hand_value_on_1x1():
    # k=2 on the 1x1 run: s2=1, s3=sqrt(2), x2=0
    p = one_by_one()
    got = epsilon_term(np.array([1.0]), np.array([math.sqrt(2)]),
                       np.array([0.0]), 2, p)
    want = (2 / 3) * (-math.sqrt(2) + math.sqrt(3) / 2 + 1
                      - 1 / (2 * math.sqrt(2)))
    assert got == pytest.approx(want, abs=1e-14)


def test_terms_match_independent_scripted_evaluation():
    # second implementation of the same formulas, written from scratch
    inst = generate_instance(3, 6, 14, density=0.5)
    p = inst.problem
    rng = np.random.default_rng(1)
    for k in (2, 3, 10):
        r1 = rng.uniform(0, 1, p.n)
        r2 = rng.uniform(0, 1, p.n)
        y1 = rng.normal(size=p.m)
        s1 = rng.normal(size=p.m)
        s2 = rng.normal(size=p.m)
        x = rng.uniform(0, 1, p.n)
        g = p.c - p.A.T @ y1
        want_d = (r2 @ g + (r2 @ r2) / (2 * math.sqrt(k + 1))
                  - r1 @ g - k * (r1 @ r1) / (2 * (k + 1) * math.sqrt(k)))
        assert delta_term(r1, r2, y1, k, p) == pytest.approx(want_d,
                                                             rel=1e-12)
        resid = p.b - p.A @ x
        want_e = k / (k + 1) * (
            -s2 @ resid + math.sqrt(k + 1) / (2 * k) * (s2 @ s2)
            + s1 @ resid - (s1 @ s1) / (2 * math.sqrt(k)))
        assert epsilon_term(s1, s2, x, k, p) == pytest.approx(want_e,
                                                              rel=1e-12)


def test_recursion_residual_formula():
    assert recursion_residual(1.0, 2 / 3, 0.0, 0.0, 2) == pytest.approx(0.0)
    assert recursion_residual(3.0, 1.0, 0.5, 0.25, 4) == pytest.approx(
        0.5 + 0.25 + 1.0 - 4 / 5 * 3.0)


def test_driver_records_match_literal_functions():
    # dual route: the solver computes diagnostics from its caches; the
    # literal functions recompute them from snapshots and fresh products
    inst = generate_instance(4, 8, 18, density=0.5)
    params = SolverParams(xi=inst.xi_min, eta=inst.eta_min, max_iters=60,
                          trace_every=1, tol=0.0)
    res = run_fwlpp(inst.problem, params)
    by_k = {rec.k: (st, rec) for st, rec in res.trace}
    for k in range(2, 61):
        st, rec = by_k[k]
        r_next = compute_r(st.y, k, inst.problem, params)
        U = potential(st.x, st.y, r_next, st.s_last, k, inst.problem)
        assert rec.U == pytest.approx(U, rel=1e-9, abs=1e-11)
        d = dual_infeasibility(st.y, inst.problem)
        assert rec.dual_infeas == pytest.approx(d, rel=1e-9, abs=1e-12)
        M = standard_gap(st.x, st.y, inst.problem, params)
        assert rec.M == pytest.approx(M, rel=1e-9, abs=1e-11)


def test_dual_infeasibility_examples():
    # A'y - c = (-1, 2) -> 2;   all negative -> 0
    p = StandardFormLP(np.eye(2), [1.0, 1.0], [1.0, -1.0])
    assert dual_infeasibility(np.array([0.0, 1.0]), p) == pytest.approx(2.0)
    assert dual_infeasibility(np.array([-2.0, -2.0]), p) == 0.0
    inst = generate_instance(5, 5, 11, density=0.6)
    assert dual_infeasibility(inst.y_star, inst.problem) == 0.0


def test_standard_gap_examples():
    p = one_by_one()
    params = SolverParams(xi=2.0, eta=2.0, max_iters=1)
    assert standard_gap(np.array([0.0]), np.array([0.0]), p, params) \
        == pytest.approx(2.0)
    inst = generate_instance(6, 6, 13, density=0.5)
    params = SolverParams(xi=inst.xi_min, eta=inst.eta_min, max_iters=1)
    M = standard_gap(inst.x_star, inst.y_star, inst.problem, params)
    assert M == pytest.approx(0.0, abs=1e-10)


def _record(k=10, U=1.0, gap=0.5, pinf=0.0, dinf=0.0):
    return DiagnosticsRecord(k=k, U=U, delta=0.0, epsilon=0.0,
                             recursion_residual=0.0, primal_infeas=pinf,
                             dual_infeas=dinf, gap=gap, M=0.0, touch_count=0)


def test_certificate_check_passes_on_clean_record():
    params = SolverParams(xi=4.0, eta=2.0, max_iters=1)
    rep = certificate_check(_record(), params, (3, 5), x=np.array([0.1, 0.0]))
    assert rep.ok and not rep.failures


def test_certificate_check_names_gap_violation():
    params = SolverParams(xi=4.0, eta=2.0, max_iters=1)
    rep = certificate_check(_record(U=0.2, gap=5.0), params, (3, 5))
    assert not rep.ok
    assert "gap_exceeds_potential" in rep.failures


def test_certificate_check_names_combined_violation():
    params = SolverParams(xi=4.0, eta=2.0, max_iters=1)
    rep = certificate_check(_record(U=-50.0, gap=-60.0, pinf=1.0, dinf=1.0),
                            params, (3, 5))
    assert not rep.ok
    assert "combined_measure_exceeds_potential_bound" in rep.failures


def test_certificate_check_flags_negative_x():
    params = SolverParams(xi=4.0, eta=2.0, max_iters=1)
    rep = certificate_check(_record(), params, (3, 5),
                            x=np.array([0.1, -1e-6]))
    assert not rep.ok
    assert "negative_primal_entry" in rep.failures


def test_certificate_check_index_guard():
    params = SolverParams(xi=4.0, eta=2.0, max_iters=1)
    with pytest.raises(IndexTooSmall):
        certificate_check(_record(k=1), params, (3, 5))


def test_data_constants_positive_and_monotone():
    inst = generate_instance(7, 5, 10, density=0.5)
    params = SolverParams(xi=3.0, eta=1.5, max_iters=1)
    D, Dbar = data_constants(inst.problem, params)
    assert Dbar > D > 0
    assert Dbar == pytest.approx(D + 5 * 1.5 ** 2 / 6)

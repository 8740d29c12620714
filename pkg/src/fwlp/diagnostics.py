"""Run diagnostics: the potential, its perturbation terms, the recursion
residual, infeasibility measures, the saddle gap, and the optimality
certificate.

The potential at iterate k combines the current pair (x_k, y_k) with the
next primal direction r_{k+1} (computed from y_k) and the last dual
direction s_k:

    U_k = -r_{k+1}'(c - A'y_k) - ||r_{k+1}||^2/(2 sqrt k)
          + s_k'(b - A x_k)    - ||s_k||^2/(2 sqrt k)
          + c'x_k - b'y_k.

Along a perturbed run the exact identity

    delta_{k+1} + epsilon_{k+1} + U_{k+1} = k/(k+1) * U_k

holds, which is the strongest internal consistency check the solver has;
its floating-point residual is reported in every trace record.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from fwlp.model import LpError, SolverParams, StandardFormLP


class IndexTooSmall(LpError):
    pass


@dataclass
class DiagnosticsRecord:
    """Per-iterate diagnostics, serialized 1:1 into trace CSV rows.

    Quantities undefined at small k (U and delta need k >= 2, epsilon
    and the recursion residual need k >= 3) are recorded as 0.0 so rows
    stay finite; consumers should start asserting where each quantity is
    defined.
    """

    k: int
    U: float
    delta: float
    epsilon: float
    recursion_residual: float
    primal_infeas: float
    dual_infeas: float
    gap: float
    M: float
    touch_count: int


def potential(x, y, r_next, s_prev, k: int, problem: StandardFormLP) -> float:
    """U at iterate k; ``r_next`` is the direction computed from y at
    index k, ``s_prev`` the dual direction produced by step k-1."""
    if k < 2:
        raise IndexTooSmall(f"potential needs k >= 2, got {k}")
    g = problem.c - problem.A.T @ y
    resid = problem.b - problem.A @ x
    rk = math.sqrt(k)
    return float(-(r_next @ g) - (r_next @ r_next) / (2 * rk)
                 + s_prev @ resid - (s_prev @ s_prev) / (2 * rk)
                 + problem.c @ x - problem.b @ y)


def delta_term(r_next, r_next2, y_next, k: int, problem: StandardFormLP) -> float:
    """Primal perturbation delta_{k+1} from directions r_{k+1}, r_{k+2}
    and the updated dual iterate y_{k+1}."""
    if k < 1:
        raise IndexTooSmall(f"delta_term needs k >= 1, got {k}")
    g = problem.c - problem.A.T @ y_next
    return float((r_next2 @ g) + (r_next2 @ r_next2) / (2 * math.sqrt(k + 1))
                 - (r_next @ g)
                 - k / (2 * (k + 1) * math.sqrt(k)) * (r_next @ r_next))


def epsilon_term(s_prev, s_next, x_cur, k: int, problem: StandardFormLP) -> float:
    """Dual perturbation epsilon_{k+1} from directions s_k, s_{k+1} and
    the pre-step primal iterate x_k."""
    if k < 2:
        raise IndexTooSmall(f"epsilon_term needs k >= 2, got {k}")
    resid = problem.b - problem.A @ x_cur
    return float(k / (k + 1.0) * (
        -(s_next @ resid) + math.sqrt(k + 1) / (2 * k) * (s_next @ s_next)
        + s_prev @ resid - (s_prev @ s_prev) / (2 * math.sqrt(k))))


def recursion_residual(U_k: float, U_next: float, delta_next: float,
                       epsilon_next: float, k: int) -> float:
    """delta_{k+1} + epsilon_{k+1} + U_{k+1} - k/(k+1) U_k; zero in exact
    arithmetic along any perturbed run."""
    if k < 2:
        raise IndexTooSmall(f"recursion_residual needs k >= 2, got {k}")
    return delta_next + epsilon_next + U_next - k / (k + 1.0) * U_k


def dual_infeasibility(y, problem: StandardFormLP) -> float:
    """max(0, max_j (A'y - c)_j): how far y sits outside the dual cone."""
    viol = problem.A.T @ y - problem.c
    return max(0.0, float(viol.max(initial=0.0)))


def standard_gap(x, y, problem: StandardFormLP, params: SolverParams) -> float:
    """Saddle gap M over the compact sets: the worst-case dual payoff at
    x minus the best primal payoff at y, both in closed form."""
    resid = problem.b - problem.A @ x
    g = problem.c - problem.A.T @ y
    gap = float(problem.c @ x - problem.b @ y)
    return (params.eta * float(np.abs(resid).sum()) + gap
            - params.xi * min(0.0, float(g.min(initial=0.0))))


def data_constants(problem: StandardFormLP, params: SolverParams) -> tuple[float, float]:
    """Constants (D, Dbar) bounding the perturbation terms from below.

    The matrix norm is upper-bounded by the Frobenius norm, which only
    enlarges the constants and keeps the bounds valid.
    """
    m = problem.m
    a_norm = float(np.linalg.norm(problem.data))
    c_norm = float(np.linalg.norm(problem.c))
    root_m_eta = math.sqrt(m) * params.eta
    D = 2 * a_norm * root_m_eta * (3 * a_norm * root_m_eta + c_norm) \
        + params.xi ** 2 / 4.0
    return D, D + m * params.eta ** 2 / 6.0


def envelope_bound(U2: float, Dbar: float) -> float:
    """F such that U_{k+1} <= F / sqrt(k) holds for all k >= 2."""
    return max(math.sqrt(2) * U2, 6.0 * Dbar)


def epsilon_lower_bound(k: int, m: int, eta: float) -> float:
    """Valid floor for epsilon_{k+1}, k >= 2."""
    return -m * eta ** 2 / (6.0 * k ** 2 * math.sqrt(k - 1))


def delta_lower_bound(k: int, Dbar: float) -> float:
    """Valid floor for delta_{k+1}, k >= 1 (Dbar >= D loosens it)."""
    return -Dbar / k ** 1.5


@dataclass
class CertificateReport:
    ok: bool
    failures: list = field(default_factory=list)
    details: dict = field(default_factory=dict)


def certificate_check(record: DiagnosticsRecord, params: SolverParams,
                      problem_dims: tuple[int, int], x=None) -> CertificateReport:
    """Verify the optimality-certificate inequalities at a traced iterate.

    Checks, with a small floating-point headroom:
      * combined measure:  xi/2 * dual_infeas + eta/2 * primal_infeas
        <= U + xi^2/(2 sqrt k) + m eta^2/(2 sqrt(k-1))
      * gap bound:  gap <= U
      * nonnegativity of the primal iterate, when ``x`` is supplied.

    Both bounds presuppose xi >= 2||x*||_1 and eta >= 2||y*||_inf.
    """
    k = record.k
    if k < 2:
        raise IndexTooSmall(f"certificate_check needs k >= 2, got {k}")
    m = problem_dims[0]
    slack = 1e-9 * (1.0 + abs(record.U) + params.xi ** 2 + m * params.eta ** 2)
    failures = []
    details = {}

    lhs = params.xi / 2.0 * record.dual_infeas \
        + params.eta / 2.0 * record.primal_infeas
    rhs = record.U + params.xi ** 2 / (2 * math.sqrt(k)) \
        + m * params.eta ** 2 / (2 * math.sqrt(k - 1))
    details["combined_measure"] = (lhs, rhs)
    if lhs > rhs + slack:
        failures.append("combined_measure_exceeds_potential_bound")

    details["gap_vs_potential"] = (record.gap, record.U)
    if record.gap > record.U + slack:
        failures.append("gap_exceeds_potential")

    if x is not None:
        xmin = float(np.min(x, initial=0.0))
        details["x_min"] = xmin
        if xmin < 0.0:
            failures.append("negative_primal_entry")

    return CertificateReport(ok=not failures, failures=failures, details=details)

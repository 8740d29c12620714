"""First-order primal-dual Frank-Wolfe solvers for standard-form LPs.

Two variants on min {c'x : Ax = b, x >= 0} over the compact saddle sets
Delta = {x >= 0, e'x <= xi} and Gamma = [-eta, eta]^m:

* ``run_fwlp``  - closed-form steps (one column of A per primal update);
* ``run_fwlpp`` - perturbed steps computed as Euclidean projections,
  with an O(1/sqrt k) optimality certificate.

The hot kernels run through a compiled extension when available
(``fwlp.BACKEND`` reports which); lazy constraint screening keeps the
per-iteration work on a certified subset of the columns.
"""
from fwlp._driver import SolveResult, StepCapture
from fwlp._kernels import BACKEND
from fwlp.diagnostics import (CertificateReport, DiagnosticsRecord,
                              IndexTooSmall, certificate_check,
                              data_constants, delta_lower_bound, delta_term,
                              dual_infeasibility, envelope_bound,
                              epsilon_lower_bound, epsilon_term, potential,
                              recursion_residual, standard_gap)
from fwlp.generate import (GeneratedInstance, RankDeficiencyRetryLimit,
                           generate_instance)
from fwlp.model import (DimensionMismatch, LpError, NonFiniteEntry,
                        SolverParams, SolverState, StandardFormLP,
                        refresh_cache, validate)
from fwlp.mps import (DuplicateEntry, GeneralLP, InconsistentBounds,
                      MalformedField, StandardFormMap,
                      UnboundedBelowVariableWithoutFR, UnsupportedSection,
                      parse_mps, to_standard_form)
from fwlp.projection import (KktSolution, SizeLimitExceeded,
                             brute_force_unit_cap, kkt_unit_cap, project_box,
                             project_simplex_cap)
from fwlp.screening import HarmonicTable, ScreeningState
from fwlp.solver_fwlp import fwlp_step, most_violated_index, run_fwlp
from fwlp.solver_fwlpp import compute_r, compute_s, fwlpp_step, run_fwlpp
from fwlp.trace import (TRACE_FIELDS, TraceRow, dumps_trace_csv,
                        loads_trace_csv, read_trace_csv, write_trace_csv)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "CertificateReport", "DiagnosticsRecord", "DimensionMismatch",
    "DuplicateEntry", "GeneralLP", "GeneratedInstance", "HarmonicTable",
    "InconsistentBounds", "IndexTooSmall", "KktSolution", "LpError",
    "MalformedField", "NonFiniteEntry", "RankDeficiencyRetryLimit",
    "ScreeningState", "SizeLimitExceeded", "SolveResult", "SolverParams",
    "SolverState", "StandardFormLP", "StandardFormMap", "StepCapture",
    "TRACE_FIELDS", "TraceRow", "UnboundedBelowVariableWithoutFR",
    "UnsupportedSection", "brute_force_unit_cap", "certificate_check",
    "compute_r", "compute_s", "data_constants", "delta_lower_bound",
    "delta_term", "dual_infeasibility", "dumps_trace_csv", "envelope_bound",
    "epsilon_lower_bound", "epsilon_term", "fwlp_step", "fwlpp_step",
    "generate_instance", "kkt_unit_cap", "loads_trace_csv",
    "most_violated_index", "parse_mps", "potential", "project_box",
    "project_simplex_cap", "read_trace_csv", "recursion_residual",
    "refresh_cache", "run_fwlp", "run_fwlpp", "standard_gap",
    "to_standard_form", "validate", "write_trace_csv",
]

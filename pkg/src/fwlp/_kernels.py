"""Kernel backend selection.

Imports the compiled extension when present, the numpy fallback
otherwise.  ``FWLP_PURE_PYTHON=1`` forces the fallback; ``BACKEND``
reports which one is active.
"""
import os

if os.environ.get("FWLP_PURE_PYTHON") == "1":
    from fwlp import _kernels_pure as _impl
    BACKEND = "pure"
else:
    try:
        from fwlp import _kernels_cy as _impl  # type: ignore[attr-defined]
        BACKEND = "compiled"
    except ImportError:
        from fwlp import _kernels_pure as _impl
        BACKEND = "pure"

unit_cap_project = _impl.unit_cap_project
eval_columns = _impl.eval_columns
fwlpp_run_span = _impl.fwlpp_run_span

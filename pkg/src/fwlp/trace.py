"""Trace rows and their CSV serialization.

Schema (one header line, one row per traced iterate):

    k,primal_infeas,dual_infeas,gap,U,delta,epsilon,recursion_residual,M,touch_count,wall_time_ns

Floats are written with repr precision so parse-back reproduces the
in-memory records bit for bit.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from fwlp.diagnostics import DiagnosticsRecord

TRACE_FIELDS = ("k", "primal_infeas", "dual_infeas", "gap", "U", "delta",
                "epsilon", "recursion_residual", "M", "touch_count",
                "wall_time_ns")


@dataclass
class TraceRow:
    k: int
    primal_infeas: float
    dual_infeas: float
    gap: float
    U: float
    delta: float
    epsilon: float
    recursion_residual: float
    M: float
    touch_count: int
    wall_time_ns: int

    @classmethod
    def from_record(cls, rec: DiagnosticsRecord, wall_time_ns: int) -> "TraceRow":
        return cls(k=rec.k, primal_infeas=rec.primal_infeas,
                   dual_infeas=rec.dual_infeas, gap=rec.gap, U=rec.U,
                   delta=rec.delta, epsilon=rec.epsilon,
                   recursion_residual=rec.recursion_residual, M=rec.M,
                   touch_count=rec.touch_count,
                   wall_time_ns=int(wall_time_ns))


def _format(row: TraceRow):
    out = []
    for name in TRACE_FIELDS:
        v = getattr(row, name)
        out.append(str(v) if isinstance(v, int) else repr(float(v)))
    return out


def write_trace_csv(path, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(TRACE_FIELDS)
        for row in rows:
            w.writerow(_format(row))


def dumps_trace_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(TRACE_FIELDS)
    for row in rows:
        w.writerow(_format(row))
    return buf.getvalue()


def read_trace_csv(path) -> list:
    with open(path, newline="") as fh:
        return _parse(csv.reader(fh))


def loads_trace_csv(text: str) -> list:
    return _parse(csv.reader(io.StringIO(text)))


def _parse(reader) -> list:
    header = tuple(next(reader))
    if header != TRACE_FIELDS:
        raise ValueError(f"unexpected trace header {header!r}")
    rows = []
    for rec in reader:
        vals = dict(zip(TRACE_FIELDS, rec))
        rows.append(TraceRow(
            k=int(vals["k"]),
            primal_infeas=float(vals["primal_infeas"]),
            dual_infeas=float(vals["dual_infeas"]),
            gap=float(vals["gap"]),
            U=float(vals["U"]),
            delta=float(vals["delta"]),
            epsilon=float(vals["epsilon"]),
            recursion_residual=float(vals["recursion_residual"]),
            M=float(vals["M"]),
            touch_count=int(vals["touch_count"]),
            wall_time_ns=int(vals["wall_time_ns"])))
    return rows

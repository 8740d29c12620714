import pytest

from fwlp.diagnostics import DiagnosticsRecord
from fwlp.trace import (TRACE_FIELDS, TraceRow, dumps_trace_csv,
                        loads_trace_csv, read_trace_csv, write_trace_csv)


def _rows():
    return [
        TraceRow(k=1, primal_infeas=1.0, dual_infeas=0.0, gap=0.0, U=0.0,
                 delta=0.0, epsilon=0.0, recursion_residual=0.0, M=2.0,
                 touch_count=3, wall_time_ns=120),
        TraceRow(k=17, primal_infeas=0.3333333333333333, dual_infeas=1e-17,
                 gap=-0.1, U=0.14644660940672627, delta=-1.25e-9,
                 epsilon=2.5e-4, recursion_residual=-6.938893903907228e-17,
                 M=1.0000000000000002, touch_count=51, wall_time_ns=999999),
    ]


def test_round_trip_through_file(tmp_path):
    path = tmp_path / "trace.csv"
    rows = _rows()
    write_trace_csv(path, rows)
    text = path.read_text()
    assert text.splitlines()[0] == ",".join(TRACE_FIELDS)
    back = read_trace_csv(path)
    assert back == rows  # bit-exact round trip


def test_round_trip_through_strings():
    rows = _rows()
    assert loads_trace_csv(dumps_trace_csv(rows)) == rows


def test_from_record():
    rec = DiagnosticsRecord(k=5, U=1.0, delta=0.1, epsilon=0.2,
                            recursion_residual=0.0, primal_infeas=0.5,
                            dual_infeas=0.25, gap=-0.75, M=3.0,
                            touch_count=40)
    row = TraceRow.from_record(rec, 777)
    assert row.k == 5 and row.wall_time_ns == 777
    assert row.U == rec.U and row.M == rec.M


def test_header_mismatch_rejected():
    with pytest.raises(ValueError):
        loads_trace_csv("a,b,c\n1,2,3\n")

import io as stdio
from itertools import count

import pytest

from redsparse import FLOAT32, Dims
from redsparse.bench import FORMATS, OPS, BenchRecord, Sink, run_benchmark, time_op, write_csv
from redsparse.matgen import GenSpec

SPEC = GenSpec(Dims(200, 4), FLOAT32, 0.8, seed=1, position_seed=2)


def test_time_op_protocol():
    sink, calls = Sink(), []
    ticks = count(0, 1000)
    times = time_op(lambda: calls.append(1) or 3, sink, clock=lambda: next(ticks))
    assert len(calls) == 7 and sink.calls == 7
    assert sink.total == 21
    assert times == [1e-6] * 5


def test_record_count_and_shape():
    sink = Sink()
    recs = run_benchmark(SPEC, [1, 10], sink=sink)
    assert len(recs) == len(FORMATS) * len(OPS) * 2
    assert {(r.format, r.op) for r in recs} == {(f, o) for f in FORMATS for o in OPS}
    assert all(len(r.times) == 5 and all(t >= 0 for t in r.times) for r in recs)
    assert sink.calls == len(recs) * 7
    by_u = {r.n_unique: r.mmr for r in recs}
    assert by_u[1] > by_u[10]


def test_subset_and_errors():
    recs = run_benchmark(SPEC, [3], ops=["spmv"], formats=["ivcsc"], repeats=2)
    assert [(r.format, r.op, len(r.times)) for r in recs] == [("ivcsc", "spmv", 2)]
    with pytest.raises(ValueError):
        run_benchmark(SPEC, [3], ops=["transpose"])


def test_sink_is_deterministic_across_runs():
    a, b = Sink(), Sink()
    run_benchmark(SPEC, [5], ops=["scalar", "spmv"], sink=a)
    run_benchmark(SPEC, [5], ops=["scalar", "spmv"], sink=b)
    assert a.total == b.total and a.total != 0


def test_csv():
    recs = [BenchRecord("csc", "spmv", 3, 0.25, (1.0, 2.0, 3.0, 4.0, 5.0))]
    buf = stdio.StringIO()
    write_csv(recs, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "format,op,n_unique,mmr,rep1,rep2,rep3,rep4,rep5,mean"
    assert lines[1].startswith("csc,spmv,3,0.250000,1.000000000")
    assert lines[1].endswith(",3.000000000")

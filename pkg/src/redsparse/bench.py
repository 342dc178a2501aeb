"""Timing harness for construct / iterate / scalar / spmv / spmm across formats.

Every (format, op, sweep point) gets two untimed warm-up runs followed by the
timed repeats; each run's result is folded into a :class:`Sink` so no work
can be skipped as dead.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence, TextIO

import numpy as np

from .analytics import column_stats, mmr
from .core import CooMatrix, DenseMatrix
from .csc import csc_from_coo, csc_iterate, csc_scalar_mul, csc_spmm, csc_spmv
from .ivcsc import ivcsc_from_coo, ivcsc_iterate, ivcsc_scalar_mul, ivcsc_spmm, ivcsc_spmv
from .matgen import GenSpec, generate, reassign_values
from .vcsc import vcsc_from_coo, vcsc_iterate, vcsc_scalar_mul, vcsc_spmm, vcsc_spmv

OPS = ("construct", "iterate", "scalar", "spmv", "spmm")
FORMATS = ("csc", "vcsc", "ivcsc")
WARMUPS = 2
REPEATS = 5

KERNELS = {
    "csc": dict(construct=csc_from_coo, iterate=csc_iterate, scalar=csc_scalar_mul, spmv=csc_spmv, spmm=csc_spmm),
    "vcsc": dict(construct=vcsc_from_coo, iterate=vcsc_iterate, scalar=vcsc_scalar_mul, spmv=vcsc_spmv, spmm=vcsc_spmm),
    "ivcsc": dict(
        construct=ivcsc_from_coo, iterate=ivcsc_iterate, scalar=ivcsc_scalar_mul, spmv=ivcsc_spmv, spmm=ivcsc_spmm
    ),
}


@dataclass(frozen=True)
class BenchRecord:
    format: str
    op: str
    n_unique: int
    mmr: float
    times: tuple[float, ...]

    @property
    def mean(self) -> float:
        return sum(self.times) / len(self.times)


class Sink:
    """Observable accumulator for benchmark results."""

    def __init__(self):
        self.total = 0.0
        self.calls = 0

    def consume(self, result) -> None:
        self.calls += 1
        if isinstance(result, DenseMatrix):
            result = result.values
        if isinstance(result, np.ndarray):
            self.total += float(result.sum(dtype=np.float64)) if result.size else 0.0
        elif isinstance(result, (int, float)):
            self.total += result
        else:
            self.total += getattr(result, "nnz", 1)


def _traverse(iterate):
    def run(m):
        acc = 0.0
        for _, _, v in iterate(m):
            acc += v
        return acc

    return run


def time_op(fn: Callable[[], object], sink: Sink, repeats: int = REPEATS, warmups: int = WARMUPS,
            clock: Callable[[], int] = time.perf_counter_ns) -> list[float]:
    """Run `fn` warmups + repeats times; return timed durations in seconds."""
    for _ in range(warmups):
        sink.consume(fn())
    times = []
    for _ in range(repeats):
        t0 = clock()
        result = fn()
        times.append((clock() - t0) / 1e9)
        sink.consume(result)
    return times


def _scalar_for(m: CooMatrix):
    return 2.0 if m.value_kind.is_float else 2


def bench_matrix(m: CooMatrix, n_unique: int, ops: Sequence[str], formats: Sequence[str], sink: Sink,
                 repeats: int = REPEATS, warmups: int = WARMUPS, spmm_cols: int = 4, seed: int = 0,
                 clock: Callable[[], int] = time.perf_counter_ns) -> list[BenchRecord]:
    rng = np.random.default_rng(seed)
    x = rng.random(m.dims.ncols)
    b = rng.random((m.dims.ncols, spmm_cols))
    s = _scalar_for(m)
    measured = mmr(column_stats(m))
    records = []
    for fmt in formats:
        k = KERNELS[fmt]
        built = k["construct"](m)
        calls = {
            "construct": lambda: k["construct"](m),
            "iterate": lambda: _traverse(k["iterate"])(built),
            "scalar": lambda: k["scalar"](built, s),
            "spmv": lambda: k["spmv"](built, x),
            "spmm": lambda: k["spmm"](built, b),
        }
        for op in ops:
            times = time_op(calls[op], sink, repeats, warmups, clock)
            records.append(BenchRecord(fmt, op, n_unique, measured, tuple(times)))
    return records


def run_benchmark(spec: GenSpec, unique_list: Iterable[int], ops: Sequence[str] = OPS,
                  formats: Sequence[str] = FORMATS, repeats: int = REPEATS, warmups: int = WARMUPS,
                  sink: Sink | None = None, spmm_cols: int = 4,
                  clock: Callable[[], int] = time.perf_counter_ns) -> list[BenchRecord]:
    """Benchmark every (format, op) at each sweep point.

    The nonzero pattern is generated once from ``spec.position_seed``; each
    point only redraws values with ``n_unique`` distinct ones.
    """
    bad = set(ops) - set(OPS) | set(formats) - set(FORMATS)
    if bad:
        raise ValueError(f"unknown ops/formats: {sorted(bad)}")
    sink = sink if sink is not None else Sink()
    base = generate(spec)
    records = []
    for u in unique_list:
        m = reassign_values(base, u, spec.seed)
        records.extend(bench_matrix(m, u, ops, formats, sink, repeats, warmups, spmm_cols, spec.seed, clock))
    return records


def write_csv(records: Sequence[BenchRecord], fh: TextIO) -> None:
    repeats = len(records[0].times) if records else REPEATS
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["format", "op", "n_unique", "mmr"] + [f"rep{i + 1}" for i in range(repeats)] + ["mean"])
    for r in records:
        w.writerow([r.format, r.op, r.n_unique, f"{r.mmr:.6f}"] + [f"{t:.9f}" for t in r.times] + [f"{r.mean:.9f}"])

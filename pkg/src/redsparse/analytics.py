"""Redundancy metrics, closed-form size models and per-matrix compression reports."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .core import CooMatrix, Dims, IndexWidthConfig, ValueKind, dense_size, group_by_value
from .csc import csc_byte_size, csc_from_coo
from .matgen import GenSpec, generate, reassign_values
from .ivcsc import LEN_FIELD_BYTES, IvcscMatrix, ivcsc_byte_size, ivcsc_from_vcsc
from .vcsc import vcsc_byte_size, vcsc_from_coo

GIB = 2**30
GB = 10**9


@dataclass(frozen=True)
class ColumnStats:
    nnz: int
    n_uniq: int
    occurrences: tuple[int, ...] = ()
    widths: tuple[int, ...] = ()

    def __post_init__(self):
        if self.occurrences or self.widths:
            if len(self.occurrences) != self.n_uniq or len(self.widths) != self.n_uniq:
                raise ValueError("per-value sequences must have n_uniq entries")
            if sum(self.occurrences) != self.nnz:
                raise ValueError("occurrences must sum to nnz")
        if self.n_uniq > self.nnz or (self.nnz > 0 and self.n_uniq < 1):
            raise ValueError(f"inconsistent column stats nnz={self.nnz}, n_uniq={self.n_uniq}")


def column_redundancy(nnz: int, n_uniq: int) -> float:
    """Log-scale redundancy of one column: 0 when all values differ, toward 1 as they repeat."""
    if nnz < 1:
        raise ValueError("redundancy is undefined for an empty column")
    if not 1 <= n_uniq <= nnz:
        raise ValueError(f"need 1 <= n_uniq <= nnz, got n_uniq={n_uniq}, nnz={nnz}")
    return 1.0 - 1.0 / (math.log10(nnz) - math.log10(n_uniq) + 1.0)


def mmr(stats: Iterable[ColumnStats | tuple[int, int]]) -> float:
    """Mean column redundancy over the non-empty columns."""
    rs = []
    for s in stats:
        nnz, n_uniq = (s.nnz, s.n_uniq) if isinstance(s, ColumnStats) else s
        if nnz > 0:
            rs.append(column_redundancy(nnz, n_uniq))
    if not rs:
        raise ValueError("mean redundancy needs at least one non-empty column")
    return math.fsum(rs) / len(rs)


def column_stats(m: CooMatrix) -> list[ColumnStats]:
    """Per-column nnz, distinct values, and per-value occurrence counts and index widths."""
    g = group_by_value(m.rows, m.cols, m.values, m.value_kind, m.dims.ncols)
    if g.counts.size:
        entries = np.empty_like(g.rows)
        entries[0] = g.rows[0]
        entries[1:] = np.diff(g.rows)
        entries[g.starts] = g.rows[g.starts]
        maxima = np.maximum.reduceat(entries, g.starts)
        widths = np.ones(maxima.size, dtype=np.int64)
        for k in range(1, 8):
            widths += maxima >= (1 << (8 * k))
    else:
        widths = np.zeros(0, np.int64)
    out = []
    for _, lo, hi in g.column_slices():
        occ = tuple(g.counts[lo:hi].tolist())
        out.append(ColumnStats(sum(occ), hi - lo, occ, tuple(widths[lo:hi].tolist())))
    return out


def ivcsc_column_stats(m: IvcscMatrix) -> list[ColumnStats]:
    """Stats read back from an encoded matrix, widths taken from the stream."""
    out = []
    vs = m.value_kind.val_size
    for c in range(m.dims.ncols):
        dec = m.decode(c)
        data = m.columns[c].data
        widths = tuple(data[off + vs] for off in dec.value_offsets)
        occ = tuple(dec.counts.tolist())
        out.append(ColumnStats(sum(occ), len(occ), occ, widths))
    return out


def csc_size_model(nnz: int, ncols: int, val_size: int, idx_size: int = 4) -> int:
    return val_size * nnz + idx_size * nnz + idx_size * (ncols + 1)


def vcsc_size_model(stats: Sequence[ColumnStats], val_size: int, idx_size: int = 4) -> int:
    return sum(val_size * s.n_uniq + idx_size * s.n_uniq + idx_size * s.nnz + idx_size for s in stats)


def ivcsc_size_model(stats: Sequence[ColumnStats], val_size: int) -> int:
    total = 0
    for s in stats:
        if s.n_uniq and not s.widths:
            raise ValueError("IVCSC model needs per-value occurrences and widths")
        total += LEN_FIELD_BYTES + s.n_uniq * (val_size + 1)
        total += sum((n + 1) * w for n, w in zip(s.occurrences, s.widths))
    return total


@dataclass(frozen=True)
class CompressionReport:
    dims: Dims
    nnz: int
    sparsity: float
    mmr: float | None
    val_size: int
    idx_size: int
    dense_bytes: int
    csc_bytes: int
    vcsc_bytes: int | None
    ivcsc_bytes: int | None
    model_derived: bool = False

    @property
    def vcsc_ratio(self) -> float | None:
        return None if self.vcsc_bytes is None else self.vcsc_bytes / self.csc_bytes

    @property
    def ivcsc_ratio(self) -> float | None:
        return None if self.ivcsc_bytes is None else self.ivcsc_bytes / self.csc_bytes

    def gib(self, field_name: str) -> float | None:
        v = getattr(self, field_name)
        return None if v is None else v / GIB

    def gb(self, field_name: str) -> float | None:
        v = getattr(self, field_name)
        return None if v is None else v / GB

    def as_row(self) -> dict:
        def pct(x):
            return None if x is None else round(100 * x, 2)

        return {
            "nrows": self.dims.nrows,
            "ncols": self.dims.ncols,
            "nnz": self.nnz,
            "sparsity": self.sparsity,
            "mmr": None if self.mmr is None else round(self.mmr, 6),
            "val_size": self.val_size,
            "idx_size": self.idx_size,
            "dense_bytes": self.dense_bytes,
            "csc_bytes": self.csc_bytes,
            "vcsc_bytes": self.vcsc_bytes,
            "vcsc_ratio_pct": pct(self.vcsc_ratio),
            "ivcsc_bytes": self.ivcsc_bytes,
            "ivcsc_ratio_pct": pct(self.ivcsc_ratio),
            "model_derived": self.model_derived,
        }


def compression_report(
    m: CooMatrix, idx_config: IndexWidthConfig = IndexWidthConfig(), materialize: bool = True
) -> CompressionReport:
    """Sizes of all three formats for `m`.

    With `materialize`, sizes are measured on built matrices; otherwise they
    come from the closed-form models evaluated on column statistics.
    """
    if m.nnz == 0:
        raise ValueError("cannot report on a matrix without nonzeros")
    stats = column_stats(m)
    vs, idx = m.value_kind.val_size, idx_config.idx_size
    if materialize:
        v = vcsc_from_coo(m, idx_config)
        csc_b = csc_byte_size(csc_from_coo(m, idx_config))
        vcsc_b = vcsc_byte_size(v)
        ivcsc_b = ivcsc_byte_size(ivcsc_from_vcsc(v))
    else:
        csc_b = csc_size_model(m.nnz, m.dims.ncols, vs, idx)
        vcsc_b = vcsc_size_model(stats, vs, idx)
        ivcsc_b = ivcsc_size_model(stats, vs)
    return CompressionReport(
        dims=m.dims,
        nnz=m.nnz,
        sparsity=1 - m.nnz / m.dims.size,
        mmr=mmr(stats),
        val_size=vs,
        idx_size=idx,
        dense_bytes=dense_size(m.dims, m.value_kind),
        csc_bytes=csc_b,
        vcsc_bytes=vcsc_b,
        ivcsc_bytes=ivcsc_b,
        model_derived=not materialize,
    )


def header_report(dims: Dims, nnz: int, kind: ValueKind, idx_size: int = 4, mmr_value: float | None = None) -> CompressionReport:
    """Report from header-level numbers only; VCSC/IVCSC sizes need column stats and stay empty."""
    return CompressionReport(
        dims=dims,
        nnz=nnz,
        sparsity=1 - nnz / dims.size,
        mmr=mmr_value,
        val_size=kind.val_size,
        idx_size=idx_size,
        dense_bytes=dense_size(dims, kind),
        csc_bytes=csc_size_model(nnz, dims.ncols, kind.val_size, idx_size),
        vcsc_bytes=None,
        ivcsc_bytes=None,
        model_derived=True,
    )


@dataclass(frozen=True)
class SweepPoint:
    n_unique: int
    mmr: float
    nnz: int
    dense_bytes: int
    csc_model: int
    csc_actual: int
    vcsc_model: int
    vcsc_actual: int
    ivcsc_model: int
    ivcsc_actual: int

    def ratio_over_dense(self, fmt: str) -> float:
        return getattr(self, f"{fmt}_actual") / self.dense_bytes


SWEEP_COLUMNS = (
    "n_unique", "mmr", "nnz", "dense_bytes",
    "csc_model", "csc_actual", "vcsc_model", "vcsc_actual", "ivcsc_model", "ivcsc_actual",
    "csc_over_dense", "vcsc_over_dense", "ivcsc_over_dense",
)


def sweep_point(m: CooMatrix, n_unique: int, idx_config: IndexWidthConfig = IndexWidthConfig()) -> SweepPoint:
    stats = column_stats(m)
    vs, idx = m.value_kind.val_size, idx_config.idx_size
    v = vcsc_from_coo(m, idx_config)
    return SweepPoint(
        n_unique=n_unique,
        mmr=mmr(stats),
        nnz=m.nnz,
        dense_bytes=dense_size(m.dims, m.value_kind),
        csc_model=csc_size_model(m.nnz, m.dims.ncols, vs, idx),
        csc_actual=csc_byte_size(csc_from_coo(m, idx_config)),
        vcsc_model=vcsc_size_model(stats, vs, idx),
        vcsc_actual=vcsc_byte_size(v),
        ivcsc_model=ivcsc_size_model(stats, vs),
        ivcsc_actual=ivcsc_byte_size(ivcsc_from_vcsc(v)),
    )


def size_sweep(spec: GenSpec, unique_list: Iterable[int], idx_config: IndexWidthConfig = IndexWidthConfig()) -> list[SweepPoint]:
    """Fixed nonzero pattern, values redrawn per pool size; one point per entry of `unique_list`."""
    base = generate(spec)
    return [sweep_point(reassign_values(base, u, spec.seed), u, idx_config) for u in unique_list]


def sweep_row(p: SweepPoint) -> list:
    return [
        p.n_unique, f"{p.mmr:.6f}", p.nnz, p.dense_bytes,
        p.csc_model, p.csc_actual, p.vcsc_model, p.vcsc_actual, p.ivcsc_model, p.ivcsc_actual,
        f"{p.ratio_over_dense('csc'):.6f}", f"{p.ratio_over_dense('vcsc'):.6f}", f"{p.ratio_over_dense('ivcsc'):.6f}",
    ]


def crossover_mmr(mmrs: Sequence[float], sizes: Sequence[float], reference: Sequence[float]) -> float | None:
    """MMR where `sizes` first falls below `reference`, walking up in MMR.

    Located by linear interpolation of the size difference between the two
    bracketing points; None if the curves never cross that way.
    """
    order = np.argsort(np.asarray(mmrs, dtype=np.float64), kind="stable")
    x = np.asarray(mmrs, dtype=np.float64)[order]
    d = (np.asarray(sizes, dtype=np.float64) - np.asarray(reference, dtype=np.float64))[order]
    for i in range(len(x) - 1):
        if d[i] >= 0 > d[i + 1]:
            return float(x[i] + (x[i + 1] - x[i]) * d[i] / (d[i] - d[i + 1]))
    return None

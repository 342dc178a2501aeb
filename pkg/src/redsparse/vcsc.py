"""Value-compressed sparse column storage.

Each column keeps its distinct values once, how often each occurs, and the
row indices grouped by value (ascending rows inside a group). Unique values
are kept in ascending numeric order so equal matrices have one encoding.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import (
    CooMatrix,
    DenseMatrix,
    Dims,
    IndexWidthConfig,
    SparseFormatError,
    ValueKind,
    _frozen,
    canonical_value_order,
    coo_from_arrays,
    group_by_value,
)
from .csc import CscMatrix, check_dense_factor, check_vector, result_dtype, scatter_spmm, scatter_spmv


@dataclass(frozen=True, eq=False)
class VcscColumn:
    uniq_values: np.ndarray
    counts: np.ndarray
    indices: np.ndarray

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        indices = np.asarray(self.indices, dtype=np.int64)
        uniq = np.asarray(self.uniq_values)
        if uniq.shape != counts.shape or uniq.ndim != 1:
            raise SparseFormatError("uniq_values and counts differ in length")
        if counts.size and counts.min() < 1:
            raise SparseFormatError("every unique value must occur at least once")
        if int(counts.sum()) != indices.size:
            raise SparseFormatError("counts do not sum to the number of indices")
        object.__setattr__(self, "uniq_values", _frozen(uniq))
        object.__setattr__(self, "counts", _frozen(counts))
        object.__setattr__(self, "indices", _frozen(indices))

    @property
    def nnz(self) -> int:
        return int(self.indices.size)

    @property
    def n_uniq(self) -> int:
        return int(self.uniq_values.size)

    def expanded_values(self) -> np.ndarray:
        """Value of every index, in stored order."""
        return np.repeat(self.uniq_values, self.counts)

    def groups(self):
        ends = np.cumsum(self.counts)
        for v, lo, hi in zip(self.uniq_values.tolist(), (ends - self.counts).tolist(), ends.tolist()):
            yield v, self.indices[lo:hi]


def _validate_column(col: VcscColumn, kind: ValueKind, nrows: int, limit: int) -> None:
    if col.uniq_values.dtype != kind.dtype:
        raise SparseFormatError(f"column values have dtype {col.uniq_values.dtype}, expected {kind.name}")
    if col.n_uniq == 0:
        return
    if np.any(col.uniq_values == 0):
        raise SparseFormatError("explicit zero stored")
    order = canonical_value_order(col.uniq_values, kind)
    if not np.array_equal(order, np.arange(col.n_uniq)):
        raise SparseFormatError("unique values must be distinct and in ascending order")
    bits = kind.to_bits(col.uniq_values)
    if np.unique(bits).size != bits.size:
        raise SparseFormatError("unique values are not distinct")
    if col.indices.min() < 0 or col.indices.max() >= nrows:
        raise SparseFormatError("row index out of range")
    if col.counts.max() >= limit:
        raise SparseFormatError("value count overflows the index width")
    starts = np.cumsum(col.counts) - col.counts
    steps = np.diff(col.indices)
    inner = np.ones(col.nnz, dtype=bool)
    inner[starts] = False
    if np.any(steps[inner[1:]] <= 0):
        raise SparseFormatError("indices must increase within each value group")


@dataclass(frozen=True, eq=False)
class VcscMatrix:
    dims: Dims
    value_kind: ValueKind
    columns: tuple[VcscColumn, ...] = field(repr=False)
    idx_config: IndexWidthConfig = IndexWidthConfig()

    def __post_init__(self):
        cols = tuple(self.columns)
        if len(cols) != self.dims.ncols:
            raise SparseFormatError(f"expected {self.dims.ncols} columns, got {len(cols)}")
        self.idx_config.check(self.dims)
        for col in cols:
            _validate_column(col, self.value_kind, self.dims.nrows, self.idx_config.limit)
        object.__setattr__(self, "columns", cols)

    @property
    def nnz(self) -> int:
        return sum(c.nnz for c in self.columns)

    def byte_size(self) -> int:
        return vcsc_byte_size(self)

    def entry_arrays(self):
        """(rows, cols, values) of every entry in traversal order."""
        rows = [c.indices for c in self.columns]
        cols = [np.full(c.nnz, j, dtype=np.int64) for j, c in enumerate(self.columns)]
        vals = [c.expanded_values() for c in self.columns]
        if not rows:
            return np.zeros(0, np.int64), np.zeros(0, np.int64), np.zeros(0, self.value_kind.dtype)
        return np.concatenate(rows), np.concatenate(cols), np.concatenate(vals).astype(self.value_kind.dtype)

    def __repr__(self):
        return f"VcscMatrix({self.dims.nrows}x{self.dims.ncols}, {self.value_kind.name}, nnz={self.nnz})"


def _from_arrays(rows, cols, values, dims: Dims, kind: ValueKind, idx_config: IndexWidthConfig) -> VcscMatrix:
    g = group_by_value(rows, cols, values, kind, dims.ncols)
    columns = []
    for c, lo, hi in g.column_slices():
        if lo == hi:
            columns.append(VcscColumn(np.zeros(0, kind.dtype), np.zeros(0, np.int64), np.zeros(0, np.int64)))
            continue
        first = g.starts[lo]
        last = g.starts[hi - 1] + g.counts[hi - 1]
        columns.append(VcscColumn(g.uniq[lo:hi], g.counts[lo:hi], g.rows[first:last]))
    return VcscMatrix(dims, kind, tuple(columns), idx_config)


def vcsc_from_coo(m: CooMatrix, idx_config: IndexWidthConfig = IndexWidthConfig()) -> VcscMatrix:
    return _from_arrays(m.rows, m.cols, m.values, m.dims, m.value_kind, idx_config)


def vcsc_from_csc(m: CscMatrix) -> VcscMatrix:
    return _from_arrays(m.row_indices, m.column_of_entries(), m.values, m.dims, m.value_kind, m.idx_config)


def vcsc_to_coo(m: VcscMatrix) -> CooMatrix:
    rows, cols, vals = m.entry_arrays()
    return coo_from_arrays(rows, cols, vals, m.dims, m.value_kind, duplicate_policy="reject")


def vcsc_iterate(m: VcscMatrix):
    """Yield (col, row, value); within a column, value group first, then row."""
    for c, col in enumerate(m.columns):
        for v, rows in col.groups():
            for r in rows.tolist():
                yield c, r, v


class OpCounter:
    """Counts scalar multiplications performed by an instrumented kernel."""

    def __init__(self):
        self.multiplications = 0

    def add(self, n: int) -> None:
        self.multiplications += int(n)


def _regroup(col: VcscColumn, new_uniq: np.ndarray, kind: ValueKind) -> VcscColumn:
    """Rebuild a column whose multiplied values collided, hit zero or reordered."""
    bits = kind.to_bits(new_uniq)
    if np.unique(bits).size == bits.size and np.all(new_uniq != 0):
        # distinct but out of order: permute whole groups, leaving each group's rows alone
        order = canonical_value_order(new_uniq, kind)
        ends = np.cumsum(col.counts)
        blocks = [col.indices[ends[k] - col.counts[k]:ends[k]] for k in order]
        return VcscColumn(new_uniq[order], col.counts[order], np.concatenate(blocks))
    vals = np.repeat(new_uniq, col.counts)
    keep = vals != 0
    g = group_by_value(col.indices[keep], np.zeros(int(keep.sum()), np.int64), vals[keep], kind, 1)
    return VcscColumn(g.uniq, g.counts, g.rows)


def vcsc_scalar_mul(m: VcscMatrix, s, counter: OpCounter | None = None) -> VcscMatrix:
    """Multiply only the unique values of every column by `s`."""
    kind = m.value_kind
    s = kind.scalar(s)
    columns = []
    for col in m.columns:
        if col.n_uniq == 0:
            columns.append(col)
            continue
        with np.errstate(over="ignore", under="ignore"):
            new_uniq = (col.uniq_values * s).astype(kind.dtype)
        if counter is not None:
            counter.add(col.n_uniq)
        if np.all(new_uniq[1:] > new_uniq[:-1]) and np.all(new_uniq != 0):
            columns.append(VcscColumn(new_uniq, col.counts, col.indices))
        else:
            columns.append(_regroup(col, new_uniq, kind))
    return VcscMatrix(m.dims, kind, tuple(columns), m.idx_config)


def vcsc_spmv(m: VcscMatrix, x) -> np.ndarray:
    x = check_vector(x, m.dims.ncols)
    rows, cols, vals = m.entry_arrays()
    return scatter_spmv(rows, cols, vals, x, m.dims.nrows, result_dtype(m.value_kind, x.dtype))


def vcsc_spmm(m: VcscMatrix, b) -> DenseMatrix:
    b = check_dense_factor(b, m.dims.ncols)
    rows, cols, vals = m.entry_arrays()
    out = scatter_spmm(rows, cols, vals, b, m.dims.nrows, result_dtype(m.value_kind, b.dtype))
    return DenseMatrix(Dims(m.dims.nrows, b.shape[1]), out)


def vcsc_byte_size(m: VcscMatrix) -> int:
    val, idx = m.value_kind.val_size, m.idx_config.idx_size
    return sum(val * c.n_uniq + idx * c.n_uniq + idx * c.nnz + idx for c in m.columns)

"""Baseline compressed sparse column storage with naive kernels."""

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
    coo_from_arrays,
)


@dataclass(frozen=True, eq=False)
class CscMatrix:
    dims: Dims
    value_kind: ValueKind
    col_ptrs: np.ndarray = field(repr=False)
    row_indices: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    idx_config: IndexWidthConfig = IndexWidthConfig()

    def __post_init__(self):
        ptrs = np.asarray(self.col_ptrs, dtype=np.int64)
        rows = np.asarray(self.row_indices, dtype=np.int64)
        vals = np.asarray(self.values)
        if vals.dtype != self.value_kind.dtype:
            raise SparseFormatError(f"values have dtype {vals.dtype}, expected {self.value_kind.name}")
        if ptrs.shape != (self.dims.ncols + 1,):
            raise SparseFormatError("col_ptrs must have ncols + 1 entries")
        if ptrs[0] != 0 or np.any(np.diff(ptrs) < 0) or ptrs[-1] != rows.size:
            raise SparseFormatError("col_ptrs must start at 0, be non-decreasing and end at nnz")
        if rows.shape != vals.shape:
            raise SparseFormatError("row_indices and values differ in length")
        if rows.size:
            if rows.min() < 0 or rows.max() >= self.dims.nrows:
                raise SparseFormatError("row index out of range")
            # rows must increase inside a column; a drop is only allowed at a column start
            drops = np.flatnonzero(np.diff(rows) <= 0) + 1
            if not np.all(np.isin(drops, ptrs)):
                raise SparseFormatError("row indices must be strictly increasing within a column")
            if np.any(vals == 0):
                raise SparseFormatError("explicit zero stored")
        self.idx_config.check(self.dims, rows.size)
        object.__setattr__(self, "col_ptrs", _frozen(ptrs))
        object.__setattr__(self, "row_indices", _frozen(rows))
        object.__setattr__(self, "values", _frozen(vals))

    @property
    def nnz(self) -> int:
        return int(self.values.size)

    def column_of_entries(self) -> np.ndarray:
        return np.repeat(np.arange(self.dims.ncols, dtype=np.int64), np.diff(self.col_ptrs))

    def byte_size(self) -> int:
        return csc_byte_size(self)

    def __repr__(self):
        return f"CscMatrix({self.dims.nrows}x{self.dims.ncols}, {self.value_kind.name}, nnz={self.nnz})"


def csc_from_coo(m: CooMatrix, idx_config: IndexWidthConfig = IndexWidthConfig()) -> CscMatrix:
    # canonical COO is already in (col, row) order
    ptrs = np.searchsorted(m.cols, np.arange(m.dims.ncols + 1), side="left")
    return CscMatrix(m.dims, m.value_kind, ptrs, m.rows.copy(), m.values.copy(), idx_config)


def csc_to_coo(m: CscMatrix) -> CooMatrix:
    return CooMatrix(m.dims, m.value_kind, m.row_indices.copy(), m.column_of_entries(), m.values.copy())


def csc_iterate(m: CscMatrix):
    """Yield (col, row, value) column by column, rows ascending."""
    ptrs = m.col_ptrs.tolist()
    rows = m.row_indices.tolist()
    vals = m.values.tolist()
    for c in range(m.dims.ncols):
        for k in range(ptrs[c], ptrs[c + 1]):
            yield c, rows[k], vals[k]


def csc_scalar_mul(m: CscMatrix, s) -> CscMatrix:
    """Multiply every stored value by `s`.

    Integer kinds wrap on overflow. A product that wraps or underflows to
    zero is dropped so that no structural zero is stored.
    """
    s = m.value_kind.scalar(s)
    with np.errstate(over="ignore", under="ignore"):
        vals = (m.values * s).astype(m.value_kind.dtype)
    if np.all(vals != 0):
        return CscMatrix(m.dims, m.value_kind, m.col_ptrs, m.row_indices, vals, m.idx_config)
    coo = coo_from_arrays(m.row_indices, m.column_of_entries(), vals, m.dims, m.value_kind)
    return csc_from_coo(coo, m.idx_config)


def result_dtype(kind: ValueKind, other: np.dtype) -> np.dtype:
    dt = np.result_type(kind.dtype, other)
    if dt.kind == "f" and not kind.is_float and np.dtype(other).kind in "ui":
        # uint64 mixed with a signed type promotes to float; keep integer semantics
        return np.dtype(np.uint64)
    return dt


def check_vector(x, ncols: int) -> np.ndarray:
    x = np.asarray(x)
    if x.ndim != 1 or x.shape[0] != ncols:
        raise ValueError(f"vector length {x.shape} does not match {ncols} columns")
    return x


def check_dense_factor(b, ncols: int) -> np.ndarray:
    b = b.values if isinstance(b, DenseMatrix) else np.asarray(b)
    if b.ndim != 2 or b.shape[0] != ncols:
        raise ValueError(f"right factor with shape {b.shape} does not match {ncols} columns")
    return b


def scatter_spmv(rows, cols, vals, x, nrows, out_dtype) -> np.ndarray:
    """y[row] += val * x[col], applied in the given entry order."""
    y = np.zeros(nrows, dtype=out_dtype)
    with np.errstate(over="ignore"):
        np.add.at(y, rows, vals.astype(out_dtype) * x.astype(out_dtype)[cols])
    return y


def scatter_spmm(rows, cols, vals, b, nrows, out_dtype) -> np.ndarray:
    """Naive accumulation applied to every column of `b` at once."""
    c = np.zeros((nrows, b.shape[1]), dtype=out_dtype)
    with np.errstate(over="ignore"):
        np.add.at(c, rows, vals.astype(out_dtype)[:, None] * b.astype(out_dtype)[cols, :])
    return c


def csc_spmv(m: CscMatrix, x) -> np.ndarray:
    x = check_vector(x, m.dims.ncols)
    return scatter_spmv(m.row_indices, m.column_of_entries(), m.values, x, m.dims.nrows, result_dtype(m.value_kind, x.dtype))


def csc_spmm(m: CscMatrix, b) -> DenseMatrix:
    b = check_dense_factor(b, m.dims.ncols)
    out = scatter_spmm(m.row_indices, m.column_of_entries(), m.values, b, m.dims.nrows, result_dtype(m.value_kind, b.dtype))
    return DenseMatrix(Dims(m.dims.nrows, b.shape[1]), out)


def csc_byte_size(m: CscMatrix) -> int:
    idx = m.idx_config.idx_size
    return m.value_kind.val_size * m.nnz + idx * m.nnz + idx * (m.dims.ncols + 1)

"""Shared domain types: dimensions, value kinds, canonical COO and dense forms."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np


class SparseFormatError(ValueError):
    """Raised when matrix data violates a format invariant."""


class TruncatedStreamError(SparseFormatError):
    """A byte stream ended before a complete structure could be read."""


@dataclass(frozen=True)
class Dims:
    nrows: int
    ncols: int

    def __post_init__(self):
        if self.nrows < 1 or self.ncols < 1:
            raise ValueError(f"dimensions must be positive, got {self.nrows}x{self.ncols}")

    @property
    def size(self) -> int:
        return self.nrows * self.ncols


_CLASSES = ("unsigned-int", "signed-int", "float")
_DTYPE_CHAR = {"unsigned-int": "u", "signed-int": "i", "float": "f"}


@dataclass(frozen=True)
class ValueKind:
    """Storage type of matrix values: byte width plus numeric class."""

    width_bytes: int
    numeric_class: str

    def __post_init__(self):
        if self.width_bytes not in (1, 2, 4, 8):
            raise ValueError(f"unsupported value width {self.width_bytes}")
        if self.numeric_class not in _CLASSES:
            raise ValueError(f"unknown numeric class {self.numeric_class!r}")
        if self.numeric_class == "float" and self.width_bytes not in (4, 8):
            raise ValueError("float values must be 4 or 8 bytes wide")

    @classmethod
    def from_name(cls, name: str) -> "ValueKind":
        dt = np.dtype(name)
        for klass, char in _DTYPE_CHAR.items():
            if dt.kind == char:
                return cls(dt.itemsize, klass)
        raise ValueError(f"no value kind for dtype {name!r}")

    @property
    def dtype(self) -> np.dtype:
        return np.dtype(f"<{_DTYPE_CHAR[self.numeric_class]}{self.width_bytes}")

    @property
    def bits_dtype(self) -> np.dtype:
        """Unsigned integer dtype used to compare values bitwise."""
        return np.dtype(f"<u{self.width_bytes}")

    @property
    def name(self) -> str:
        return self.dtype.name

    @property
    def val_size(self) -> int:
        return self.width_bytes

    @property
    def is_float(self) -> bool:
        return self.numeric_class == "float"

    @property
    def code(self) -> int:
        return VALUE_KINDS.index(self)

    @classmethod
    def from_code(cls, code: int) -> "ValueKind":
        if not 0 <= code < len(VALUE_KINDS):
            raise SparseFormatError(f"unknown value kind code {code}")
        return VALUE_KINDS[code]

    def coerce(self, values) -> np.ndarray:
        """Convert `values` to this kind's dtype, refusing lossy conversions.

        Integer kinds reject non-integral or out-of-range input. Float kinds
        accept rounding but reject finite input that overflows to infinity.
        """
        arr = np.asarray(values)
        dt = self.dtype
        if arr.dtype == dt:
            return arr
        if arr.size == 0:
            return arr.astype(dt)
        if arr.dtype.kind == "b":
            arr = arr.astype(np.uint8)
        if arr.dtype.kind not in "uif":
            raise ValueError(f"cannot store {arr.dtype} values as {self.name}")
        if self.is_float:
            with np.errstate(over="ignore"):
                out = arr.astype(dt)
            if np.any(np.isinf(out) & np.isfinite(arr)):
                raise ValueError(f"value overflows {self.name}")
            return out
        info = np.iinfo(dt)
        if arr.dtype.kind == "f":
            if not np.all(np.isfinite(arr)) or np.any(arr != np.floor(arr)):
                raise ValueError(f"non-integral value cannot be stored as {self.name}")
            # compare in float space; exact for the ranges float64 can reach
            if np.any(arr < float(info.min)) or np.any(arr > float(info.max)):
                raise ValueError(f"value out of range for {self.name}")
            return arr.astype(dt)
        if int(arr.min()) < info.min or int(arr.max()) > info.max:
            raise ValueError(f"value out of range for {self.name}")
        return arr.astype(dt)

    def scalar(self, s) -> np.generic:
        """Coerce a single scalar multiplier, rejecting zero."""
        if isinstance(s, (int, np.integer)) and not self.is_float:
            info = np.iinfo(self.dtype)
            if not info.min <= int(s) <= info.max:
                raise ValueError(f"scalar {s} out of range for {self.name}")
        value = self.coerce(np.asarray([s]))[0]
        if value == 0:
            raise ValueError("scalar multiplier must be nonzero")
        return value

    def to_bits(self, values: np.ndarray) -> np.ndarray:
        return np.ascontiguousarray(values, dtype=self.dtype).view(self.bits_dtype)


VALUE_KINDS: tuple[ValueKind, ...] = tuple(
    ValueKind(w, c)
    for c, widths in (("unsigned-int", (1, 2, 4, 8)), ("signed-int", (1, 2, 4, 8)), ("float", (4, 8)))
    for w in widths
)

FLOAT32 = ValueKind(4, "float")
FLOAT64 = ValueKind(8, "float")


@dataclass(frozen=True)
class IndexWidthConfig:
    idx_size: int = 4

    def __post_init__(self):
        if self.idx_size not in (1, 2, 4, 8):
            raise ValueError(f"unsupported index width {self.idx_size}")

    @property
    def limit(self) -> int:
        """Exclusive upper bound of a stored index."""
        return 256**self.idx_size

    def check(self, dims: Dims, nnz: int | None = None) -> None:
        if dims.nrows >= self.limit:
            raise ValueError(f"{dims.nrows} rows do not fit {self.idx_size}-byte indices")
        if nnz is not None and nnz >= self.limit:
            raise ValueError(f"{nnz} nonzeros overflow {self.idx_size}-byte column pointers")


class Triplet(NamedTuple):
    row: int
    col: int
    value: object


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class CooMatrix:
    """Canonical triplet matrix, sorted by (col, row) with no zeros or duplicates.

    Build through :func:`canonicalize_coo` or :func:`coo_from_arrays`; the
    constructor validates but does not repair.
    """

    dims: Dims
    value_kind: ValueKind
    rows: np.ndarray
    cols: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=np.int64)
        cols = np.asarray(self.cols, dtype=np.int64)
        values = np.asarray(self.values)
        if values.dtype != self.value_kind.dtype:
            raise SparseFormatError(f"values have dtype {values.dtype}, expected {self.value_kind.name}")
        if not (rows.shape == cols.shape == values.shape) or rows.ndim != 1:
            raise SparseFormatError("rows, cols and values must be 1-d arrays of equal length")
        if rows.size:
            if rows.min() < 0 or rows.max() >= self.dims.nrows:
                raise SparseFormatError("row index out of range")
            if cols.min() < 0 or cols.max() >= self.dims.ncols:
                raise SparseFormatError("column index out of range")
            key = cols * self.dims.nrows + rows
            if np.any(np.diff(key) <= 0):
                raise SparseFormatError("triplets must be strictly sorted by (col, row)")
            if np.any(values == 0):
                raise SparseFormatError("explicit zero stored")
        object.__setattr__(self, "rows", _frozen(rows))
        object.__setattr__(self, "cols", _frozen(cols))
        object.__setattr__(self, "values", _frozen(values))

    @property
    def nnz(self) -> int:
        return int(self.values.size)

    @property
    def triplets(self) -> list[Triplet]:
        return [Triplet(int(r), int(c), v) for r, c, v in zip(self.rows, self.cols, self.values.tolist())]

    def __iter__(self):
        return iter(self.triplets)

    def __len__(self):
        return self.nnz

    def __eq__(self, other):
        if not isinstance(other, CooMatrix):
            return NotImplemented
        return self.value_kind == other.value_kind and coo_equal(self, other)

    __hash__ = None

    def __repr__(self):
        return f"CooMatrix({self.dims.nrows}x{self.dims.ncols}, {self.value_kind.name}, nnz={self.nnz})"


@dataclass(frozen=True, eq=False)
class DenseMatrix:
    dims: Dims
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.asarray(self.values)
        if arr.ndim == 1:
            if arr.size != self.dims.size:
                raise ValueError(f"expected {self.dims.size} values, got {arr.size}")
            arr = arr.reshape(self.dims.nrows, self.dims.ncols)
        if arr.shape != (self.dims.nrows, self.dims.ncols):
            raise ValueError(f"dense shape {arr.shape} does not match {self.dims}")
        object.__setattr__(self, "values", _frozen(arr))

    @classmethod
    def from_array(cls, arr) -> "DenseMatrix":
        arr = np.asarray(arr)
        if arr.ndim != 2:
            raise ValueError("dense matrix must be 2-d")
        return cls(Dims(*arr.shape), arr)

    def flat(self) -> np.ndarray:
        return self.values.ravel()

    def byte_size(self, val_size: int) -> int:
        return self.dims.size * val_size


def dense_size(dims: Dims, kind: ValueKind) -> int:
    return dims.nrows * dims.ncols * kind.val_size


def coo_from_arrays(rows, cols, values, dims: Dims, kind: ValueKind, duplicate_policy: str = "sum") -> CooMatrix:
    """Vectorized canonicalization of parallel index/value arrays."""
    if duplicate_policy not in ("sum", "reject"):
        raise ValueError(f"unknown duplicate policy {duplicate_policy!r}")
    rows = np.asarray(rows, dtype=np.int64).ravel()
    cols = np.asarray(cols, dtype=np.int64).ravel()
    vals = kind.coerce(np.asarray(values).ravel())
    if not rows.shape == cols.shape == vals.shape:
        raise ValueError("rows, cols and values must have equal length")
    if rows.size:
        if rows.min() < 0 or rows.max() >= dims.nrows:
            raise IndexError("row index out of range")
        if cols.min() < 0 or cols.max() >= dims.ncols:
            raise IndexError("column index out of range")
    order = np.lexsort((rows, cols))
    rows, cols, vals = rows[order], cols[order], vals[order]
    if rows.size > 1:
        key = cols * dims.nrows + rows
        starts = np.flatnonzero(np.r_[True, key[1:] != key[:-1]])
        if starts.size != rows.size:
            if duplicate_policy == "reject":
                raise ValueError("duplicate (row, col) entry")
            with np.errstate(over="ignore"):
                vals = np.add.reduceat(vals, starts).astype(kind.dtype)
            rows, cols = rows[starts], cols[starts]
    keep = vals != 0
    return CooMatrix(dims, kind, rows[keep], cols[keep], vals[keep])


def canonicalize_coo(
    triplets: Iterable[Sequence], dims: Dims, kind: ValueKind, duplicate_policy: str = "sum"
) -> CooMatrix:
    """Sort triplets by (col, row), merge duplicates and drop zeros."""
    triplets = list(triplets)
    if not triplets:
        return coo_from_arrays([], [], [], dims, kind, duplicate_policy)
    rows, cols, values = zip(*triplets)
    return coo_from_arrays(rows, cols, np.array(values, dtype=_input_dtype(values, kind)), dims, kind, duplicate_policy)


def _input_dtype(values, kind: ValueKind):
    # python ints beyond int64 must survive until range checking
    if not kind.is_float and all(isinstance(v, (int, np.integer)) for v in values):
        lo, hi = min(int(v) for v in values), max(int(v) for v in values)
        if lo >= np.iinfo(np.int64).min and hi <= np.iinfo(np.int64).max:
            return np.int64
        if lo >= 0 and hi <= np.iinfo(np.uint64).max:
            return np.uint64
        raise ValueError(f"value out of range for {kind.name}")
    return None


def coo_to_dense(m: CooMatrix) -> DenseMatrix:
    out = np.zeros((m.dims.nrows, m.dims.ncols), dtype=m.value_kind.dtype)
    out[m.rows, m.cols] = m.values
    return DenseMatrix(m.dims, out)


def dense_to_coo(d: DenseMatrix, kind: ValueKind | None = None) -> CooMatrix:
    kind = kind or ValueKind.from_name(d.values.dtype.name)
    rows, cols = np.nonzero(d.values)
    return coo_from_arrays(rows, cols, d.values[rows, cols], d.dims, kind)


def coo_equal(a: CooMatrix, b: CooMatrix) -> bool:
    """Structural and bitwise value equality of two canonical matrices."""
    if a.value_kind != b.value_kind:
        raise TypeError(f"value kind mismatch: {a.value_kind.name} vs {b.value_kind.name}")
    if a.dims != b.dims or a.nnz != b.nnz:
        return False
    kind = a.value_kind
    return bool(
        np.array_equal(a.rows, b.rows)
        and np.array_equal(a.cols, b.cols)
        and np.array_equal(kind.to_bits(a.values), kind.to_bits(b.values))
    )


def canonical_value_order(values: np.ndarray, kind: ValueKind) -> np.ndarray:
    """Permutation sorting values ascending; NaNs last, ties broken by bit pattern."""
    return np.lexsort((kind.to_bits(values), values))


@dataclass(frozen=True)
class ValueGroups:
    """Entries of a matrix grouped by (column, canonical unique value, row).

    `rows` and `values` are permuted into grouped order; group k spans
    `rows[starts[k]:starts[k] + counts[k]]`, belongs to column `group_cols[k]`
    and holds value `uniq[k]`.
    """

    rows: np.ndarray
    starts: np.ndarray
    counts: np.ndarray
    uniq: np.ndarray
    group_cols: np.ndarray
    ncols: int

    def column_slices(self):
        """Yield, per column, the half-open range of its groups."""
        bounds = np.searchsorted(self.group_cols, np.arange(self.ncols + 1))
        for c in range(self.ncols):
            yield c, int(bounds[c]), int(bounds[c + 1])


def group_by_value(rows: np.ndarray, cols: np.ndarray, values: np.ndarray, kind: ValueKind, ncols: int) -> ValueGroups:
    """Group nonzeros per column by value, ranking values in canonical order."""
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    values = np.asarray(values, dtype=kind.dtype)
    if values.size == 0:
        empty = np.zeros(0, dtype=np.int64)
        return ValueGroups(empty, empty, empty, values, empty, ncols)
    bits = kind.to_bits(values)
    ubits, inverse = np.unique(bits, return_inverse=True)
    uvals = ubits.view(kind.dtype)
    rank = np.empty(ubits.size, dtype=np.int64)
    rank[canonical_value_order(uvals, kind)] = np.arange(ubits.size)
    vrank = rank[inverse.ravel()]
    order = np.lexsort((rows, vrank, cols))
    g_rows, g_rank, g_cols = rows[order], vrank[order], cols[order]
    boundary = np.r_[True, (g_rank[1:] != g_rank[:-1]) | (g_cols[1:] != g_cols[:-1])]
    starts = np.flatnonzero(boundary)
    counts = np.diff(np.r_[starts, g_rows.size])
    return ValueGroups(g_rows, starts, counts, values[order][starts], g_cols[starts], ncols)

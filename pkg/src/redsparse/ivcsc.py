"""Index- and value-compressed sparse column storage.

A column is one byte stream made of sections, one per distinct value::

    [value: val_size bytes][width: 1 byte][first row][delta]...[delta][0]

Rows are positive-delta encoded: the first row is stored as is, every later
entry is the gap to the previous row. All entries of a section, including the
zero delimiter, are byte-packed to the smallest width that fits the largest
entry. Everything is little-endian.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .core import (
    CooMatrix,
    DenseMatrix,
    Dims,
    SparseFormatError,
    TruncatedStreamError,
    ValueKind,
    canonical_value_order,
    coo_from_arrays,
    group_by_value,
)
from .csc import check_dense_factor, check_vector, result_dtype, scatter_spmm, scatter_spmv
from .vcsc import VcscMatrix

LEN_FIELD_BYTES = 8


def compute_index_width(max_entry: int) -> int:
    """Smallest byte count w >= 1 with max_entry < 256**w."""
    if max_entry < 0:
        raise ValueError("entries must be non-negative")
    return max(1, (int(max_entry).bit_length() + 7) // 8)


class IndexBlock(NamedTuple):
    width: int
    payload: bytes

    @property
    def n_entries(self) -> int:
        return len(self.payload) // self.width


def encode_index_block(rows) -> IndexBlock:
    rows = [int(r) for r in rows]
    if not rows:
        raise ValueError("an index block needs at least one row")
    entries = [rows[0]] + [b - a for a, b in zip(rows, rows[1:])]
    if rows[0] < 0 or any(d <= 0 for d in entries[1:]):
        raise ValueError("rows must be non-negative and strictly increasing")
    width = compute_index_width(max(entries))
    payload = b"".join(e.to_bytes(width, "little") for e in entries) + bytes(width)
    return IndexBlock(width, payload)


def _unpack_le(raw: bytes | memoryview, width: int) -> np.ndarray:
    """Little-endian unsigned integers of `width` bytes each, as int64/uint64."""
    if width in (1, 2, 4, 8):
        return np.frombuffer(raw, dtype=f"<u{width}").astype(np.uint64)
    grid = np.frombuffer(raw, dtype=np.uint8).reshape(-1, width)
    padded = np.zeros((grid.shape[0], 8), dtype=np.uint8)
    padded[:, :width] = grid
    return padded.view("<u8").ravel()


def _find_delimiter(buf: bytes, start: int, width: int) -> int:
    """Offset of the first aligned all-zero entry at or after `start`."""
    zero = bytes(width)
    pos = start
    while True:
        hit = buf.find(zero, pos)
        if hit < 0:
            raise TruncatedStreamError("index block has no delimiter")
        misalign = (hit - start) % width
        if misalign == 0:
            return hit
        pos = hit + (width - misalign)


def decode_index_block(width: int, buf: bytes, offset: int = 0, nrows: int | None = None) -> tuple[np.ndarray, int]:
    """Decode one block starting at `offset`; returns (rows, bytes consumed).

    The first entry is read unconditionally as an absolute row, so a first
    row of zero is not mistaken for the delimiter.
    """
    if not 1 <= width <= 8:
        raise SparseFormatError(f"invalid index width {width}")
    if len(buf) - offset < 2 * width:
        raise TruncatedStreamError("index block truncated")
    end = _find_delimiter(buf, offset + width, width)
    entries = _unpack_le(memoryview(buf)[offset:end], width)
    if width == 8 and sum(entries.tolist()) >= 2**63:
        raise SparseFormatError("delta overflow")
    rows = np.cumsum(entries.astype(np.int64))
    if nrows is not None and rows[-1] >= nrows:
        raise SparseFormatError("delta overflow beyond matrix rows")
    return rows, end + width - offset


@dataclass(frozen=True, eq=False)
class IvcscColumn:
    data: bytes = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "data", bytes(self.data))

    @property
    def byte_len(self) -> int:
        return len(self.data)


class DecodedColumn(NamedTuple):
    uniq_values: np.ndarray
    counts: np.ndarray
    indices: np.ndarray
    value_offsets: list[int]


def decode_column(data: bytes, kind: ValueKind, nrows: int | None = None) -> DecodedColumn:
    vs = kind.val_size
    pos, n = 0, len(data)
    values, counts, blocks, offsets = [], [], [], []
    while pos < n:
        if n - pos < vs + 1:
            raise TruncatedStreamError("section header truncated")
        offsets.append(pos)
        values.append(data[pos:pos + vs])
        width = data[pos + vs]
        rows, used = decode_index_block(width, data, pos + vs + 1, nrows)
        blocks.append(rows)
        counts.append(rows.size)
        pos += vs + 1 + used
    uniq = np.frombuffer(b"".join(values), dtype=kind.dtype).copy()
    indices = np.concatenate(blocks) if blocks else np.zeros(0, np.int64)
    return DecodedColumn(uniq, np.asarray(counts, dtype=np.int64), indices, offsets)


def encode_column(uniq: np.ndarray, counts: np.ndarray, indices: np.ndarray, kind: ValueKind) -> bytes:
    """Vectorized section encoder; groups must be in canonical order."""
    n_sec = uniq.size
    if n_sec == 0:
        return b""
    vs = kind.val_size
    counts = np.asarray(counts, dtype=np.int64)
    indices = np.asarray(indices, dtype=np.int64)
    starts = np.cumsum(counts) - counts
    entries = np.empty_like(indices)
    entries[0] = indices[0]
    entries[1:] = np.diff(indices)
    entries[starts] = indices[starts]
    if np.any(entries < 0) or np.any(np.delete(entries, starts) <= 0):
        raise SparseFormatError("rows must increase within each value group")
    maxima = np.maximum.reduceat(entries, starts)
    widths = np.ones(n_sec, dtype=np.int64)
    for k in range(1, 8):
        widths += maxima >= (1 << (8 * k))
    sizes = vs + 1 + (counts + 1) * widths
    sec_off = np.cumsum(sizes) - sizes
    out = np.zeros(int(sizes.sum()), dtype=np.uint8)
    vbytes = np.ascontiguousarray(uniq, dtype=kind.dtype).view(np.uint8).reshape(n_sec, vs)
    out[sec_off[:, None] + np.arange(vs)] = vbytes
    out[sec_off + vs] = widths
    sec_of_entry = np.repeat(np.arange(n_sec), counts)
    pos_in_sec = np.arange(indices.size) - starts[sec_of_entry]
    w = widths[sec_of_entry]
    entry_off = sec_off[sec_of_entry] + vs + 1 + pos_in_sec * w
    for k in range(8):
        mask = w > k
        if not mask.any():
            break
        out[entry_off[mask] + k] = (entries[mask] >> (8 * k)) & 0xFF
    return out.tobytes()


@dataclass(frozen=True, eq=False)
class IvcscMatrix:
    dims: Dims
    value_kind: ValueKind
    columns: tuple[IvcscColumn, ...] = field(repr=False)

    def __post_init__(self):
        cols = tuple(self.columns)
        if len(cols) != self.dims.ncols:
            raise SparseFormatError(f"expected {self.dims.ncols} columns, got {len(cols)}")
        object.__setattr__(self, "columns", cols)

    def decode(self, c: int) -> DecodedColumn:
        return decode_column(self.columns[c].data, self.value_kind, self.dims.nrows)

    @cached_property
    def nnz(self) -> int:
        return sum(int(self.decode(c).counts.sum()) for c in range(self.dims.ncols))

    def _with_nnz(self, nnz: int) -> "IvcscMatrix":
        self.__dict__["nnz"] = int(nnz)
        return self

    def byte_size(self) -> int:
        return ivcsc_byte_size(self)

    def validate(self) -> int:
        """Full decode check of section order, widths and row bounds; returns nnz."""
        nnz = 0
        for c in range(self.dims.ncols):
            col = self.decode(c)
            nnz += int(col.indices.size)
            if col.uniq_values.size == 0:
                continue
            if np.any(col.uniq_values == 0):
                raise SparseFormatError("explicit zero stored")
            order = canonical_value_order(col.uniq_values, self.value_kind)
            bits = self.value_kind.to_bits(col.uniq_values)
            if not np.array_equal(order, np.arange(order.size)) or np.unique(bits).size != bits.size:
                raise SparseFormatError("sections must hold distinct values in ascending order")
            if encode_column(col.uniq_values, col.counts, col.indices, self.value_kind) != self.columns[c].data:
                raise SparseFormatError("index widths are not minimal")
        return self._with_nnz(nnz).nnz

    def entry_arrays(self):
        rows, cols, vals = [], [], []
        for c in range(self.dims.ncols):
            col = self.decode(c)
            rows.append(col.indices)
            cols.append(np.full(col.indices.size, c, dtype=np.int64))
            vals.append(np.repeat(col.uniq_values, col.counts))
        if not rows:
            return np.zeros(0, np.int64), np.zeros(0, np.int64), np.zeros(0, self.value_kind.dtype)
        return np.concatenate(rows), np.concatenate(cols), np.concatenate(vals).astype(self.value_kind.dtype)

    def __repr__(self):
        return f"IvcscMatrix({self.dims.nrows}x{self.dims.ncols}, {self.value_kind.name})"


def ivcsc_from_coo(m: CooMatrix) -> IvcscMatrix:
    g = group_by_value(m.rows, m.cols, m.values, m.value_kind, m.dims.ncols)
    columns = []
    for _, lo, hi in g.column_slices():
        if lo == hi:
            columns.append(IvcscColumn(b""))
            continue
        first, last = g.starts[lo], g.starts[hi - 1] + g.counts[hi - 1]
        data = encode_column(g.uniq[lo:hi], g.counts[lo:hi], g.rows[first:last], m.value_kind)
        columns.append(IvcscColumn(data))
    return IvcscMatrix(m.dims, m.value_kind, tuple(columns))._with_nnz(m.nnz)


def ivcsc_from_vcsc(m: VcscMatrix) -> IvcscMatrix:
    columns = tuple(
        IvcscColumn(encode_column(c.uniq_values, c.counts, c.indices, m.value_kind)) for c in m.columns
    )
    return IvcscMatrix(m.dims, m.value_kind, columns)._with_nnz(m.nnz)


def ivcsc_to_coo(m: IvcscMatrix) -> CooMatrix:
    rows, cols, vals = m.entry_arrays()
    return coo_from_arrays(rows, cols, vals, m.dims, m.value_kind, duplicate_policy="reject")


def ivcsc_iterate(m: IvcscMatrix):
    """Yield (col, row, value) in the same order as the VCSC traversal."""
    kind, nrows = m.value_kind, m.dims.nrows
    vs = kind.val_size
    for c, col in enumerate(m.columns):
        data = col.data
        pos, n = 0, len(data)
        while pos < n:
            value = np.frombuffer(data, dtype=kind.dtype, count=1, offset=pos)[0].item()
            width = data[pos + vs]
            rows, used = decode_index_block(width, data, pos + vs + 1, nrows)
            for r in rows.tolist():
                yield c, r, value
            pos += vs + 1 + used


def ivcsc_scalar_mul(m: IvcscMatrix, s) -> IvcscMatrix:
    """Rewrite every section's value bytes; index payloads are left untouched.

    Columns whose products collide, reach zero or change order are re-encoded.
    """
    kind = m.value_kind
    s = kind.scalar(s)
    vs = kind.val_size
    columns = []
    for c, col in enumerate(m.columns):
        if not col.data:
            columns.append(col)
            continue
        dec = m.decode(c)
        with np.errstate(over="ignore", under="ignore"):
            new_uniq = (dec.uniq_values * s).astype(kind.dtype)
        if np.all(new_uniq[1:] > new_uniq[:-1]) and np.all(new_uniq != 0):
            buf = bytearray(col.data)
            raw = new_uniq.tobytes()
            for k, off in enumerate(dec.value_offsets):
                buf[off:off + vs] = raw[k * vs:(k + 1) * vs]
            columns.append(IvcscColumn(bytes(buf)))
            continue
        vals = np.repeat(new_uniq, dec.counts)
        keep = vals != 0
        g = group_by_value(dec.indices[keep], np.zeros(int(keep.sum()), np.int64), vals[keep], kind, 1)
        columns.append(IvcscColumn(encode_column(g.uniq, g.counts, g.rows, kind)))
    return IvcscMatrix(m.dims, kind, tuple(columns))


def ivcsc_spmv(m: IvcscMatrix, x) -> np.ndarray:
    x = check_vector(x, m.dims.ncols)
    rows, cols, vals = m.entry_arrays()
    return scatter_spmv(rows, cols, vals, x, m.dims.nrows, result_dtype(m.value_kind, x.dtype))


def ivcsc_spmm(m: IvcscMatrix, b) -> DenseMatrix:
    b = check_dense_factor(b, m.dims.ncols)
    rows, cols, vals = m.entry_arrays()
    out = scatter_spmm(rows, cols, vals, b, m.dims.nrows, result_dtype(m.value_kind, b.dtype))
    return DenseMatrix(Dims(m.dims.nrows, b.shape[1]), out)


def ivcsc_byte_size(m: IvcscMatrix) -> int:
    return sum(LEN_FIELD_BYTES + col.byte_len for col in m.columns)

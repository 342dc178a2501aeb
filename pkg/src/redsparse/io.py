"""Matrix Market text I/O and the binary container for CSC, VCSC and IVCSC.

Container layout (little-endian)::

    0   4s  magic b"IVSK"
    4   u8  version (1)
    5   u8  format code: 0 CSC, 1 VCSC, 2 IVCSC
    6   u8  value kind code (index into core.VALUE_KINDS)
    7   u8  index width in bytes (0 for IVCSC, which has none)
    8   u64 nrows
    16  u64 ncols
    24  u64 nnz
    32  payload

Payload length always equals the format's ``byte_size``.
"""

from __future__ import annotations

import struct
from os import PathLike
from typing import Union

import numpy as np

from .core import (
    FLOAT64,
    CooMatrix,
    Dims,
    IndexWidthConfig,
    SparseFormatError,
    TruncatedStreamError,
    ValueKind,
    coo_from_arrays,
)
from .analytics import csc_size_model
from .csc import CscMatrix, csc_byte_size
from .ivcsc import LEN_FIELD_BYTES, IvcscColumn, IvcscMatrix, ivcsc_byte_size
from .vcsc import VcscColumn, VcscMatrix, vcsc_byte_size

MAGIC = b"IVSK"
VERSION = 1
HEADER = struct.Struct("<4sBBBBQQQ")
HEADER_SIZE = HEADER.size  # 32

FORMAT_CODES = {CscMatrix: 0, VcscMatrix: 1, IvcscMatrix: 2}
FORMAT_NAMES = {"csc": CscMatrix, "vcsc": VcscMatrix, "ivcsc": IvcscMatrix}

AnyMatrix = Union[CscMatrix, VcscMatrix, IvcscMatrix]


class ContainerError(SparseFormatError):
    pass


class BadMagicError(ContainerError):
    pass


class UnsupportedVersionError(ContainerError):
    pass


class PayloadLengthError(ContainerError):
    pass


class MatrixMarketError(SparseFormatError):
    pass


# -- Matrix Market ---------------------------------------------------------

_KIND_COMMENT = "% value-kind:"


def _as_bytes(source) -> bytes:
    if isinstance(source, (bytes, bytearray, memoryview)):
        return bytes(source)
    if isinstance(source, (str, PathLike)):
        with open(source, "rb") as fh:
            return fh.read()
    return source.read()


def read_matrix_market(source, kind: ValueKind | None = None) -> CooMatrix:
    """Parse a coordinate Matrix Market stream into canonical COO.

    `source` is bytes, a binary file object or a path. Indices are shifted to
    0-based, duplicates summed, explicit zeros dropped, and symmetric storage
    mirrored. Without `kind`, the value kind comes from a ``% value-kind:``
    comment if present, else from the field: real -> float64,
    integer -> int64, pattern -> uint8.
    """
    text = _as_bytes(source).decode("ascii", errors="replace")
    lines = text.splitlines()
    if not lines:
        raise MatrixMarketError("empty Matrix Market stream")
    banner = lines[0].split()
    if len(banner) != 5 or banner[0].lower() != "%%matrixmarket":
        raise MatrixMarketError(f"malformed header line: {lines[0]!r}")
    obj, layout, fld, symmetry = (t.lower() for t in banner[1:])
    if obj != "matrix" or layout != "coordinate":
        raise MatrixMarketError(f"only coordinate matrices are supported, got {obj} {layout}")
    if fld not in ("real", "integer", "pattern"):
        raise MatrixMarketError(f"unsupported field {fld!r}")
    if symmetry not in ("general", "symmetric"):
        raise MatrixMarketError(f"unsupported symmetry {symmetry!r}")

    body_start = None
    for i, line in enumerate(lines[1:], start=1):
        stripped = line.strip()
        if kind is None and stripped.lower().startswith(_KIND_COMMENT):
            kind = ValueKind.from_name(stripped[len(_KIND_COMMENT):].strip())
        if stripped and not stripped.startswith("%"):
            body_start = i
            break
    if body_start is None:
        raise MatrixMarketError("missing size line")
    try:
        nrows, ncols, nnz = (int(t) for t in lines[body_start].split())
    except ValueError:
        raise MatrixMarketError(f"malformed size line: {lines[body_start]!r}") from None
    if kind is None:
        kind = {"real": FLOAT64, "integer": ValueKind(8, "signed-int"), "pattern": ValueKind(1, "unsigned-int")}[fld]

    per_line = 2 if fld == "pattern" else 3
    tokens = " ".join(l for l in lines[body_start + 1:] if not l.lstrip().startswith("%")).split()
    if len(tokens) != nnz * per_line:
        raise MatrixMarketError(f"expected {nnz} entries of {per_line} fields, got {len(tokens)} tokens")
    grid = np.array(tokens, dtype=object).reshape(nnz, per_line) if nnz else np.zeros((0, per_line), object)
    try:
        rows = grid[:, 0].astype(np.int64) - 1
        cols = grid[:, 1].astype(np.int64) - 1
        if fld == "pattern":
            values = np.ones(nnz, dtype=np.uint8)
        elif fld == "integer":
            values = np.array([int(t) for t in grid[:, 2]], dtype=object)
            values = values.astype(np.int64 if kind.numeric_class != "unsigned-int" else np.uint64)
        else:
            values = grid[:, 2].astype(np.float64)
    except (ValueError, OverflowError) as exc:
        raise MatrixMarketError(f"malformed entry: {exc}") from None
    if nnz and (rows.min() < 0 or rows.max() >= nrows or cols.min() < 0 or cols.max() >= ncols):
        raise MatrixMarketError("entry index out of declared bounds")
    if symmetry == "symmetric":
        if nrows != ncols:
            raise MatrixMarketError("symmetric storage requires a square matrix")
        off = rows != cols
        rows, cols = np.r_[rows, cols[off]], np.r_[cols, rows[off]]
        values = np.r_[values, values[off]]
    try:
        return coo_from_arrays(rows, cols, values, Dims(nrows, ncols), kind)
    except ValueError as exc:
        raise MatrixMarketError(str(exc)) from None


def write_matrix_market(m: CooMatrix) -> bytes:
    field = "real" if m.value_kind.is_float else "integer"
    out = [
        f"%%MatrixMarket matrix coordinate {field} general",
        f"{_KIND_COMMENT} {m.value_kind.name}",
        f"{m.dims.nrows} {m.dims.ncols} {m.nnz}",
    ]
    # repr of the float64 widening is exact for float32 values too
    fmt = (lambda v: repr(float(v))) if m.value_kind.is_float else str
    out.extend(f"{r + 1} {c + 1} {fmt(v)}" for r, c, v in zip(m.rows.tolist(), m.cols.tolist(), m.values.tolist()))
    return ("\n".join(out) + "\n").encode("ascii")


# -- binary container -------------------------------------------------------

def _le(arr: np.ndarray, width: int, signed: bool = False) -> bytes:
    return np.ascontiguousarray(arr).astype(f"<{'i' if signed else 'u'}{width}").tobytes()


def _values_le(values: np.ndarray, kind: ValueKind) -> bytes:
    return np.ascontiguousarray(values, dtype=kind.dtype).tobytes()


def encode_payload(m: AnyMatrix) -> bytes:
    kind = m.value_kind
    if isinstance(m, CscMatrix):
        idx = m.idx_config.idx_size
        return _le(m.col_ptrs, idx) + _le(m.row_indices, idx) + _values_le(m.values, kind)
    if isinstance(m, VcscMatrix):
        idx = m.idx_config.idx_size
        parts = []
        for col in m.columns:
            parts.append(col.n_uniq.to_bytes(idx, "little"))
            parts.append(_values_le(col.uniq_values, kind))
            parts.append(_le(col.counts, idx))
            parts.append(_le(col.indices, idx))
        return b"".join(parts)
    if isinstance(m, IvcscMatrix):
        parts = []
        for col in m.columns:
            parts.append(col.byte_len.to_bytes(LEN_FIELD_BYTES, "little"))
            parts.append(col.data)
        return b"".join(parts)
    raise TypeError(f"cannot serialize {type(m).__name__}")


def serialize(m: AnyMatrix) -> bytes:
    idx = 0 if isinstance(m, IvcscMatrix) else m.idx_config.idx_size
    nnz = m.nnz
    header = HEADER.pack(MAGIC, VERSION, FORMAT_CODES[type(m)], m.value_kind.code, idx, m.dims.nrows, m.dims.ncols, nnz)
    return header + encode_payload(m)


class _Reader:
    def __init__(self, buf: bytes, pos: int):
        self.buf, self.pos = buf, pos

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.buf):
            raise TruncatedStreamError(f"stream truncated at byte {len(self.buf)}, needed {self.pos + n}")
        chunk = self.buf[self.pos:self.pos + n]
        self.pos += n
        return chunk

    def uints(self, count: int, width: int) -> np.ndarray:
        return np.frombuffer(self.take(count * width), dtype=f"<u{width}").astype(np.int64)

    def values(self, count: int, kind: ValueKind) -> np.ndarray:
        return np.frombuffer(self.take(count * kind.val_size), dtype=kind.dtype).copy()

    def uint(self, width: int) -> int:
        return int.from_bytes(self.take(width), "little")


def read_header(buf: bytes):
    if len(buf) < HEADER_SIZE:
        if not MAGIC.startswith(bytes(buf[:4])):
            raise BadMagicError("not an IVSK container")
        raise TruncatedStreamError("container header truncated")
    magic, version, fmt, kind_code, idx, nrows, ncols, nnz = HEADER.unpack_from(buf)
    if magic != MAGIC:
        raise BadMagicError(f"bad magic {magic!r}")
    if version != VERSION:
        raise UnsupportedVersionError(f"unsupported container version {version}")
    if fmt not in (0, 1, 2):
        raise ContainerError(f"unknown format code {fmt}")
    kind = ValueKind.from_code(kind_code)
    if fmt == 2:
        if idx != 0:
            raise ContainerError("IVCSC containers carry index width 0")
    elif idx not in (1, 2, 4, 8):
        raise ContainerError(f"invalid index width {idx}")
    return fmt, kind, idx, Dims(nrows, ncols), nnz


def deserialize(buf: bytes | bytearray | memoryview) -> AnyMatrix:
    buf = bytes(buf)
    fmt, kind, idx, dims, nnz = read_header(buf)
    r = _Reader(buf, HEADER_SIZE)
    try:
        if fmt == 0:
            expected = csc_size_model(nnz, dims.ncols, kind.val_size, idx)
            if len(buf) - HEADER_SIZE < expected:
                raise TruncatedStreamError(f"CSC payload has {len(buf) - HEADER_SIZE} bytes, header implies {expected}")
            ptrs = r.uints(dims.ncols + 1, idx)
            rows = r.uints(nnz, idx)
            vals = r.values(nnz, kind)
            m = CscMatrix(dims, kind, ptrs, rows, vals, IndexWidthConfig(idx))
        elif fmt == 1:
            columns = []
            for _ in range(dims.ncols):
                n_uniq = r.uint(idx)
                uniq = r.values(n_uniq, kind)
                counts = r.uints(n_uniq, idx)
                indices = r.uints(int(counts.sum()), idx)
                columns.append(VcscColumn(uniq, counts, indices))
            m = VcscMatrix(dims, kind, tuple(columns), IndexWidthConfig(idx))
        else:
            columns = []
            for _ in range(dims.ncols):
                n = r.uint(LEN_FIELD_BYTES)
                columns.append(IvcscColumn(r.take(n)))
            m = IvcscMatrix(dims, kind, tuple(columns))
        if r.pos != len(buf):
            raise PayloadLengthError(f"{len(buf) - r.pos} trailing bytes after payload")
        actual_nnz = m.validate() if isinstance(m, IvcscMatrix) else m.nnz
    except (TruncatedStreamError, ContainerError):
        raise
    except ValueError as exc:
        raise ContainerError(str(exc)) from exc
    if actual_nnz != nnz:
        raise PayloadLengthError(f"payload holds {actual_nnz} nonzeros, header says {nnz}")
    return m


def payload_size(m: AnyMatrix) -> int:
    if isinstance(m, CscMatrix):
        return csc_byte_size(m)
    if isinstance(m, VcscMatrix):
        return vcsc_byte_size(m)
    return ivcsc_byte_size(m)


def save(path, m: AnyMatrix | CooMatrix) -> None:
    data = write_matrix_market(m) if isinstance(m, CooMatrix) else serialize(m)
    with open(path, "wb") as fh:
        fh.write(data)


def load(path) -> AnyMatrix:
    with open(path, "rb") as fh:
        return deserialize(fh.read())

"""Brute-force references kept independent of the package's numpy paths."""

import struct

import numpy as np

from redsparse import VALUE_KINDS, CooMatrix, Dims, ValueKind, coo_from_arrays

STRUCT_CHAR = {
    ("unsigned-int", 1): "B", ("unsigned-int", 2): "H", ("unsigned-int", 4): "I", ("unsigned-int", 8): "Q",
    ("signed-int", 1): "b", ("signed-int", 2): "h", ("signed-int", 4): "i", ("signed-int", 8): "q",
    ("float", 4): "f", ("float", 8): "d",
}


def pack_value(v, kind: ValueKind) -> bytes:
    return struct.pack("<" + STRUCT_CHAR[(kind.numeric_class, kind.width_bytes)], v)


def dense_lists(m: CooMatrix):
    out = [[0] * m.dims.ncols for _ in range(m.dims.nrows)]
    for r, c, v in m.triplets:
        out[r][c] = v
    return out


def column_groups(m: CooMatrix):
    """Per column: list of (value, sorted rows), values in ascending order."""
    cols = [dict() for _ in range(m.dims.ncols)]
    for r, c, v in m.triplets:
        key = pack_value(v, m.value_kind)
        cols[c].setdefault(key, (v, []))[1].append(r)
    out = []
    for groups in cols:
        items = sorted(groups.values(), key=lambda g: g[0])
        out.append([(v, sorted(rows)) for v, rows in items])
    return out


def byte_width(n: int) -> int:
    w = 1
    while n >= 256**w:
        w += 1
    return w


def ivcsc_column_bytes(groups, kind: ValueKind) -> bytes:
    out = b""
    for v, rows in groups:
        entries = [rows[0]] + [b - a for a, b in zip(rows, rows[1:])]
        w = byte_width(max(entries))
        out += pack_value(v, kind) + bytes([w])
        out += b"".join(e.to_bytes(w, "little") for e in entries) + bytes(w)
    return out


def csc_size_ref(nnz, ncols, val, idx):
    return val * nnz + idx * nnz + idx * (ncols + 1)


def vcsc_size_ref(m: CooMatrix, idx):
    total = 0
    for groups in column_groups(m):
        n_uniq = len(groups)
        nnz = sum(len(rows) for _, rows in groups)
        total += m.value_kind.val_size * n_uniq + idx * n_uniq + idx * nnz + idx
    return total


def ivcsc_size_ref(m: CooMatrix):
    total = 0
    for groups in column_groups(m):
        total += 8 + len(groups) * (m.value_kind.val_size + 1)
        for _, rows in groups:
            entries = [rows[0]] + [b - a for a, b in zip(rows, rows[1:])]
            total += (len(rows) + 1) * byte_width(max(entries))
    return total


def random_pool(rng, kind: ValueKind, n):
    if kind.is_float:
        return (rng.random(n) * 200 - 100).astype(kind.dtype)
    info = np.iinfo(kind.dtype)
    lo, hi = max(int(info.min), -1000), min(int(info.max), 1000)
    vals = rng.integers(lo, hi, size=n, endpoint=True)
    vals[vals == 0] = 1
    return vals.astype(kind.dtype)


def random_coo(rng, nrows, ncols, sparsity, kind: ValueKind, n_unique) -> CooMatrix:
    mask = rng.random((nrows, ncols)) >= sparsity
    rows, cols = np.nonzero(mask)
    pool = random_pool(rng, kind, n_unique)
    vals = pool[rng.integers(0, n_unique, size=rows.size)]
    return coo_from_arrays(rows, cols, vals, Dims(nrows, ncols), kind)


def corpus(n=200, seed=12345, max_rows=200, max_cols=50):
    """Reproducible mix of shapes, sparsities, value kinds and redundancy levels."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(n):
        kind = VALUE_KINDS[i % len(VALUE_KINDS)]
        sparsity = (0.5, 0.9, 0.99)[i % 3]
        nrows = int(rng.integers(1, max_rows + 1))
        ncols = int(rng.integers(1, max_cols + 1))
        n_unique = int(rng.choice([1, 2, 5, 20, 1000]))
        out.append(random_coo(rng, nrows, ncols, sparsity, kind, n_unique))
    return out


def rel_err(y, ref):
    y = np.asarray(y, dtype=np.float64)
    ref = np.asarray(ref, dtype=np.float64)
    scale = max(float(np.max(np.abs(ref))) if ref.size else 0.0, 1e-300)
    return float(np.max(np.abs(y - ref))) / scale if ref.size else 0.0

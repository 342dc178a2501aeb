"""Seeded random sparse matrices with controlled sparsity and value redundancy.

Positions and values use separate numpy PCG64 streams so that the values of
a matrix can be redrawn while its nonzero pattern stays fixed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import FLOAT32, CooMatrix, Dims, ValueKind

_POOL_RANGE_CAP = 1 << 24


@dataclass(frozen=True)
class GenSpec:
    dims: Dims
    value_kind: ValueKind = FLOAT32
    sparsity: float = 0.9
    n_unique: int = 1
    seed: int = 0
    position_seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.sparsity <= 1.0:
            raise ValueError(f"sparsity must lie in [0, 1], got {self.sparsity}")
        if self.n_unique < 1:
            raise ValueError("n_unique must be at least 1")

    @property
    def nnz_per_column(self) -> int:
        return nnz_per_column(self.dims.nrows, self.sparsity)


def nnz_per_column(nrows: int, sparsity: float) -> int:
    # round first: (1 - 0.9) * 1e6 evaluates to 99999.99999999997
    return min(nrows, math.floor(round((1.0 - sparsity) * nrows, 9)))


def _representable_nonzero(kind: ValueKind) -> int | None:
    """Count of nonzero values of an integer kind; None for floats (practically unbounded)."""
    if kind.is_float:
        return None
    info = np.iinfo(kind.dtype)
    return int(info.max) - int(info.min)


def value_pool(kind: ValueKind, n_unique: int, rng: np.random.Generator) -> np.ndarray:
    """`n_unique` distinct nonzero values.

    Integers are uniform over the kind's nonzero range; floats are uniform in
    (0, 1] so that products and sums stay well conditioned.
    """
    available = _representable_nonzero(kind)
    if available is not None and n_unique > available:
        raise ValueError(f"{kind.name} has only {available} nonzero values, asked for {n_unique}")
    dt = kind.dtype
    if kind.is_float:
        pool = np.zeros(0, dt)
        while pool.size < n_unique:
            draw = rng.random(2 * (n_unique - pool.size) + 16).astype(dt)
            draw = draw[draw != 0]
            pool = np.concatenate([pool, draw])
            _, first = np.unique(kind.to_bits(pool), return_index=True)
            pool = pool[np.sort(first)]
        return pool[:n_unique]
    info = np.iinfo(dt)
    lo, hi = int(info.min), int(info.max)
    if available <= _POOL_RANGE_CAP:
        picks = rng.choice(available, size=n_unique, replace=False).astype(np.int64) + lo
        picks[picks >= 0] += 1  # skip zero
        return picks.astype(dt)
    pool = np.zeros(0, dt)
    while pool.size < n_unique:
        draw = rng.integers(lo, hi, size=2 * (n_unique - pool.size) + 16, dtype=dt, endpoint=True)
        draw = draw[draw != 0]
        pool = np.concatenate([pool, draw])
        _, first = np.unique(pool, return_index=True)
        pool = pool[np.sort(first)]
    return pool[:n_unique]


def positions(dims: Dims, sparsity: float, position_seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Canonically ordered (rows, cols), k uniform rows per column without replacement."""
    k = nnz_per_column(dims.nrows, sparsity)
    rng = np.random.default_rng(position_seed)
    rows = np.empty(k * dims.ncols, dtype=np.int64)
    for c in range(dims.ncols):
        rows[c * k:(c + 1) * k] = np.sort(rng.choice(dims.nrows, size=k, replace=False))
    cols = np.repeat(np.arange(dims.ncols, dtype=np.int64), k)
    return rows, cols


def _draw_values(kind: ValueKind, n_unique: int, nnz: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    pool = value_pool(kind, n_unique, rng)
    return pool[rng.integers(0, n_unique, size=nnz)]


def generate(spec: GenSpec) -> CooMatrix:
    rows, cols = positions(spec.dims, spec.sparsity, spec.position_seed)
    values = _draw_values(spec.value_kind, spec.n_unique, rows.size, spec.seed)
    return CooMatrix(spec.dims, spec.value_kind, rows, cols, values)


def reassign_values(m: CooMatrix, n_unique: int, seed: int) -> CooMatrix:
    """Same nonzero pattern, values redrawn from a fresh pool of `n_unique`."""
    if n_unique < 1:
        raise ValueError("n_unique must be at least 1")
    values = _draw_values(m.value_kind, n_unique, m.nnz, seed)
    return CooMatrix(m.dims, m.value_kind, m.rows, m.cols, values)

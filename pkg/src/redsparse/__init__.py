"""Redundancy-aware column-compressed sparse matrices (CSC, VCSC, IVCSC)."""

from .core import (
    FLOAT32,
    FLOAT64,
    VALUE_KINDS,
    CooMatrix,
    DenseMatrix,
    Dims,
    IndexWidthConfig,
    SparseFormatError,
    Triplet,
    TruncatedStreamError,
    ValueKind,
    canonicalize_coo,
    coo_equal,
    coo_from_arrays,
    coo_to_dense,
    dense_to_coo,
)
from .csc import CscMatrix, csc_byte_size, csc_from_coo, csc_iterate, csc_scalar_mul, csc_spmm, csc_spmv, csc_to_coo
from .vcsc import (
    OpCounter,
    VcscColumn,
    VcscMatrix,
    vcsc_byte_size,
    vcsc_from_coo,
    vcsc_from_csc,
    vcsc_iterate,
    vcsc_scalar_mul,
    vcsc_spmm,
    vcsc_spmv,
    vcsc_to_coo,
)
from .ivcsc import (
    IndexBlock,
    IvcscColumn,
    IvcscMatrix,
    compute_index_width,
    decode_index_block,
    encode_index_block,
    ivcsc_byte_size,
    ivcsc_from_coo,
    ivcsc_from_vcsc,
    ivcsc_iterate,
    ivcsc_scalar_mul,
    ivcsc_spmm,
    ivcsc_spmv,
    ivcsc_to_coo,
)
from .analytics import (
    ColumnStats,
    CompressionReport,
    column_redundancy,
    column_stats,
    compression_report,
    csc_size_model,
    ivcsc_size_model,
    mmr,
    vcsc_size_model,
)
from .matgen import GenSpec, generate, reassign_values

__all__ = [
    "canonicalize_coo",
    "column_redundancy",
    "column_stats",
    "ColumnStats",
    "compression_report",
    "CompressionReport",
    "compute_index_width",
    "coo_equal",
    "coo_from_arrays",
    "coo_to_dense",
    "CooMatrix",
    "csc_byte_size",
    "csc_from_coo",
    "csc_iterate",
    "csc_scalar_mul",
    "csc_size_model",
    "csc_spmm",
    "csc_spmv",
    "csc_to_coo",
    "CscMatrix",
    "decode_index_block",
    "dense_to_coo",
    "DenseMatrix",
    "Dims",
    "encode_index_block",
    "FLOAT32",
    "FLOAT64",
    "generate",
    "GenSpec",
    "IndexBlock",
    "IndexWidthConfig",
    "ivcsc_byte_size",
    "ivcsc_from_coo",
    "ivcsc_from_vcsc",
    "ivcsc_iterate",
    "ivcsc_scalar_mul",
    "ivcsc_size_model",
    "ivcsc_spmm",
    "ivcsc_spmv",
    "ivcsc_to_coo",
    "IvcscColumn",
    "IvcscMatrix",
    "mmr",
    "OpCounter",
    "reassign_values",
    "SparseFormatError",
    "Triplet",
    "TruncatedStreamError",
    "VALUE_KINDS",
    "ValueKind",
    "vcsc_byte_size",
    "vcsc_from_coo",
    "vcsc_from_csc",
    "vcsc_iterate",
    "vcsc_scalar_mul",
    "vcsc_size_model",
    "vcsc_spmm",
    "vcsc_spmv",
    "vcsc_to_coo",
    "VcscColumn",
    "VcscMatrix",
]

__version__ = "0.1.0"

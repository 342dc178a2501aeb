import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import coo_matrices
from oracles import byte_width, column_groups, ivcsc_size_ref, ivcsc_column_bytes, random_coo, rel_err
from redsparse import (
    FLOAT32,
    FLOAT64,
    Dims,
    SparseFormatError,
    TruncatedStreamError,
    ValueKind,
    canonicalize_coo,
    compute_index_width,
    coo_equal,
    coo_to_dense,
    csc_from_coo,
    csc_spmm,
    csc_spmv,
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
    vcsc_from_coo,
    vcsc_iterate,
)
from redsparse.ivcsc import IvcscColumn, IvcscMatrix, decode_column

U8 = ValueKind(1, "unsigned-int")
I32 = ValueKind(4, "signed-int")
GROUPED = [(0, 0, 3), (2, 0, 3), (7, 0, 3), (5, 0, 7)]


@pytest.mark.parametrize("n, w", [(0, 1), (255, 1), (256, 2), (65535, 2), (65536, 3), (70000, 3), (2**64 - 1, 8)])
def test_index_width(n, w):
    assert compute_index_width(n) == w


@given(st.integers(0, 2**64 - 1))
def test_index_width_matches_oracle(n):
    assert compute_index_width(n) == byte_width(n)


@pytest.mark.parametrize(
    "rows, width, payload",
    [
        ([5, 9, 12], 1, "05 04 03 00"),
        ([0], 1, "00 00"),
        ([0, 300], 2, "00 00 2c 01 00 00"),
    ],
)
def test_index_block_examples(rows, width, payload):
    block = encode_index_block(rows)
    assert block.width == width
    assert block.payload == bytes.fromhex(payload)
    decoded, used = decode_index_block(block.width, block.payload)
    assert decoded.tolist() == rows and used == len(block.payload)


def test_index_block_errors():
    with pytest.raises(ValueError):
        encode_index_block([])
    with pytest.raises(ValueError):
        encode_index_block([3, 3])
    with pytest.raises(TruncatedStreamError):
        decode_index_block(1, bytes([5, 4, 3]))
    with pytest.raises(SparseFormatError):
        decode_index_block(1, bytes([5, 4, 0]), nrows=8)


def test_delimiter_search_is_aligned():
    # delta 256 at width 2 is 00 01: a zero byte that is not a delimiter
    block = encode_index_block([1, 257, 258])
    assert block.payload == bytes.fromhex("0100 0001 0100 0000")
    assert decode_index_block(2, block.payload)[0].tolist() == [1, 257, 258]
    # misaligned zero pair straddling two entries: 01 00 | 00 01
    block = encode_index_block([1, 257])
    assert decode_index_block(2, block.payload + b"\xff")[0].tolist() == [1, 257]


@given(st.lists(st.integers(0, 2**40), min_size=1, max_size=30, unique=True))
def test_index_block_round_trip(rows):
    rows = sorted(rows)
    block = encode_index_block(rows)
    entries = [rows[0]] + [b - a for a, b in zip(rows, rows[1:])]
    assert block.width == byte_width(max(entries))
    assert decode_index_block(block.width, block.payload)[0].tolist() == rows


def test_column_layout_example():
    m = ivcsc_from_coo(canonicalize_coo(GROUPED, Dims(8, 1), U8))
    col = m.columns[0]
    assert col.data == bytes.fromhex("03 01 00 02 05 00 07 01 05 00")
    assert col.byte_len == 10
    assert ivcsc_byte_size(m) == 18
    assert coo_equal(ivcsc_to_coo(m), canonicalize_coo(GROUPED, Dims(8, 1), U8))


def test_float_column_size():
    m = ivcsc_from_coo(canonicalize_coo([(0, 0, 1.5), (2, 0, 1.5), (7, 0, 1.5), (5, 0, -2.0)], Dims(8, 1), FLOAT32))
    assert ivcsc_byte_size(m) == 8 + 2 * 5 + 4 + 2 == 24


def test_empty_matrix():
    m = ivcsc_from_coo(canonicalize_coo([], Dims(4, 3), U8))
    assert all(c.byte_len == 0 for c in m.columns)
    assert ivcsc_byte_size(m) == 24
    assert list(ivcsc_iterate(m)) == []


@given(coo_matrices())
def test_encoding_matches_oracle(m):
    iv = ivcsc_from_coo(m)
    for col, groups in zip(iv.columns, column_groups(m)):
        assert col.data == ivcsc_column_bytes(groups, m.value_kind)
    assert ivcsc_byte_size(iv) == ivcsc_size_ref(m)


@given(coo_matrices())
def test_paths_and_round_trip(m):
    a = ivcsc_from_coo(m)
    b = ivcsc_from_vcsc(vcsc_from_coo(m))
    assert [c.data for c in a.columns] == [c.data for c in b.columns]
    assert coo_equal(ivcsc_to_coo(a), m)
    assert list(ivcsc_iterate(a)) == list(vcsc_iterate(vcsc_from_coo(m)))
    assert a.validate() == m.nnz


def test_single_section_iterate():
    m = ivcsc_from_coo(canonicalize_coo([(5, 0, 7), (9, 0, 7), (12, 0, 7)], Dims(13, 1), U8))
    assert list(ivcsc_iterate(m)) == [(0, 5, 7), (0, 9, 7), (0, 12, 7)]


@given(coo_matrices())
def test_width_minimality(m):
    iv = ivcsc_from_coo(m)
    for c in range(m.dims.ncols):
        data = iv.columns[c].data
        dec = decode_column(data, m.value_kind)
        vs = m.value_kind.val_size
        ends = np.cumsum(dec.counts)
        for k, off in enumerate(dec.value_offsets):
            w = data[off + vs]
            rows = dec.indices[ends[k] - dec.counts[k]:ends[k]]
            entries = np.r_[rows[0], np.diff(rows)]
            assert w == 1 or entries.max() >= 256 ** (w - 1)


def test_scalar_mul():
    m = ivcsc_from_coo(canonicalize_coo(GROUPED, Dims(8, 1), I32))
    assert ivcsc_scalar_mul(m, 1).columns[0].data == m.columns[0].data
    doubled = ivcsc_scalar_mul(m, 2)
    dec_a, dec_b = m.decode(0), doubled.decode(0)
    assert dec_b.uniq_values.tolist() == [6, 14]
    vs = 4
    data_a, data_b = m.columns[0].data, doubled.columns[0].data
    # everything but the value bytes is unchanged
    mask = np.ones(len(data_a), bool)
    for off in dec_a.value_offsets:
        mask[off:off + vs] = False
    assert np.array_equal(np.frombuffer(data_a, np.uint8)[mask], np.frombuffer(data_b, np.uint8)[mask])
    with pytest.raises(ValueError):
        ivcsc_scalar_mul(m, 0)


def test_scalar_mul_collision():
    trips = [(0, 0, 1), (1, 0, 2), (2, 0, 129), (3, 0, 1)]
    m = ivcsc_from_coo(canonicalize_coo(trips, Dims(4, 1), U8))
    out = ivcsc_scalar_mul(m, 128)
    assert list(ivcsc_iterate(out)) == [(0, 0, 128), (0, 2, 128), (0, 3, 128)]


@given(coo_matrices(), st.sampled_from([-2, 3]))
def test_scalar_mul_dense_oracle(m, s):
    assume(s > 0 or m.value_kind.numeric_class != "unsigned-int")
    out = ivcsc_to_coo(ivcsc_scalar_mul(ivcsc_from_coo(m), s))
    with np.errstate(over="ignore"):
        expect = coo_to_dense(m).values * m.value_kind.scalar(s)
    assert np.array_equal(coo_to_dense(out).values, expect)
    assert [c.data for c in ivcsc_scalar_mul(ivcsc_from_coo(m), s).columns] == [
        c.data for c in ivcsc_from_coo(out).columns
    ]


def test_spmv_spmm(rng):
    ident = ivcsc_from_coo(canonicalize_coo([(0, 0, 1), (1, 1, 1)], Dims(2, 2), I32))
    assert ivcsc_spmv(ident, np.array([4, 5])).tolist() == [4, 5]
    zero = ivcsc_from_coo(canonicalize_coo([], Dims(3, 2), I32))
    assert ivcsc_spmv(zero, np.array([1, 1])).tolist() == [0, 0, 0]
    coo = random_coo(rng, 100, 20, 0.8, I32, 6)
    x = rng.integers(-9, 10, size=20)
    assert np.array_equal(ivcsc_spmv(ivcsc_from_coo(coo), x), csc_spmv(csc_from_coo(coo), x))
    b = rng.integers(-5, 5, size=(20, 3))
    assert np.array_equal(ivcsc_spmm(ivcsc_from_coo(coo), b).values, csc_spmm(csc_from_coo(coo), b).values)
    fcoo = random_coo(rng, 100, 20, 0.8, FLOAT32, 6)
    xf = rng.random(20)
    assert rel_err(ivcsc_spmv(ivcsc_from_coo(fcoo), xf), coo_to_dense(fcoo).values.astype(float) @ xf) <= 1e-5


def test_malformed_streams_rejected():
    kind = U8
    with pytest.raises(TruncatedStreamError):
        decode_column(bytes([3, 1, 0]), kind)
    with pytest.raises(SparseFormatError):
        decode_column(bytes([3, 0, 0, 0]), kind)  # width 0
    with pytest.raises(TruncatedStreamError):
        decode_column(bytes([3]), kind)
    bad_order = IvcscMatrix(Dims(4, 1), kind, (IvcscColumn(bytes.fromhex("07 01 00 00 03 01 01 00")),))
    with pytest.raises(SparseFormatError):
        bad_order.validate()
    wide = IvcscMatrix(Dims(4, 1), kind, (IvcscColumn(bytes.fromhex("07 02 0100 0000")),))
    with pytest.raises(SparseFormatError):
        wide.validate()


def test_width_step_in_size():
    # same structure, the only delta straddles the one-byte boundary
    a = ivcsc_from_coo(canonicalize_coo([(0, 0, 5), (255, 0, 5)], Dims(600, 1), U8))
    b = ivcsc_from_coo(canonicalize_coo([(0, 0, 5), (256, 0, 5)], Dims(600, 1), U8))
    assert ivcsc_byte_size(b) - ivcsc_byte_size(a) == (2 + 1) * (2 - 1)


def test_all_ones_dense_matrix_compresses():
    rows, cols = np.meshgrid(np.arange(10_000), np.arange(10), indexing="ij")
    from redsparse import coo_from_arrays

    for kind in (FLOAT32, FLOAT64):
        m = coo_from_arrays(rows.ravel(), cols.ravel(), np.ones(100_000), Dims(10_000, 10), kind)
        assert ivcsc_byte_size(ivcsc_from_coo(m)) < 10_000 * 10 * kind.val_size


def test_scalar_mul_unsigned_wrap_reorders():
    trips = [(0, 0, 5), (1, 0, 90), (2, 0, 5)]
    m = ivcsc_from_coo(canonicalize_coo(trips, Dims(3, 1), U8))
    out = ivcsc_scalar_mul(m, 3)
    assert list(ivcsc_iterate(out)) == [(0, 1, 14), (0, 0, 15), (0, 2, 15)]
    assert out.validate() == 3

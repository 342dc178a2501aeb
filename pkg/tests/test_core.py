import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import coo_matrices
from oracles import dense_lists
from redsparse import (
    FLOAT32,
    FLOAT64,
    VALUE_KINDS,
    CooMatrix,
    Dims,
    IndexWidthConfig,
    SparseFormatError,
    ValueKind,
    canonicalize_coo,
    coo_equal,
    coo_to_dense,
    dense_to_coo,
)

I32 = ValueKind(4, "signed-int")
U8 = ValueKind(1, "unsigned-int")


def test_dims_and_kinds_validate():
    with pytest.raises(ValueError):
        Dims(0, 3)
    with pytest.raises(ValueError):
        ValueKind(2, "float")
    with pytest.raises(ValueError):
        ValueKind(3, "signed-int")
    with pytest.raises(ValueError):
        IndexWidthConfig(3)
    assert len(VALUE_KINDS) == 10
    assert all(ValueKind.from_code(k.code) == k for k in VALUE_KINDS)
    assert ValueKind.from_name("float32") == FLOAT32


def test_index_width_must_cover_rows():
    with pytest.raises(ValueError):
        IndexWidthConfig(1).check(Dims(256, 1))
    IndexWidthConfig(1).check(Dims(255, 1))


def test_duplicates_summed():
    m = canonicalize_coo([(0, 0, 5), (0, 0, 3)], Dims(1, 1), I32)
    assert m.triplets == [(0, 0, 8)]


def test_duplicates_rejected():
    with pytest.raises(ValueError):
        canonicalize_coo([(0, 0, 5), (0, 0, 3)], Dims(1, 1), I32, duplicate_policy="reject")


def test_explicit_zero_dropped():
    assert canonicalize_coo([(2, 1, 0)], Dims(3, 2), I32).triplets == []


def test_duplicates_cancelling_to_zero_dropped():
    assert canonicalize_coo([(0, 0, 4), (0, 0, -4)], Dims(1, 1), I32).nnz == 0


def test_negative_zero_dropped():
    assert canonicalize_coo([(0, 0, -0.0), (1, 0, 2.5)], Dims(2, 1), FLOAT64).triplets == [(1, 0, 2.5)]


def test_sorted_by_col_then_row():
    m = canonicalize_coo([(3, 0, 2), (1, 0, 7)], Dims(4, 1), I32)
    assert m.triplets == [(1, 0, 7), (3, 0, 2)]
    m = canonicalize_coo([(0, 1, 5), (2, 0, 4)], Dims(3, 2), I32)
    assert m.triplets == [(2, 0, 4), (0, 1, 5)]


@pytest.mark.parametrize("trip", [(3, 0, 1), (0, 2, 1), (-1, 0, 1)])
def test_out_of_range_index(trip):
    with pytest.raises(IndexError):
        canonicalize_coo([trip], Dims(3, 2), I32)


@pytest.mark.parametrize("value", [256, -1, 1.5])
def test_unrepresentable_value(value):
    with pytest.raises(ValueError):
        canonicalize_coo([(0, 0, value)], Dims(1, 1), U8)


def test_float32_overflow_rejected():
    with pytest.raises(ValueError):
        canonicalize_coo([(0, 0, 1e300)], Dims(1, 1), FLOAT32)


def test_constructor_validates():
    with pytest.raises(SparseFormatError):
        CooMatrix(Dims(2, 1), I32, np.array([1, 0]), np.array([0, 0]), np.array([1, 2], dtype=np.int32))
    with pytest.raises(SparseFormatError):
        CooMatrix(Dims(2, 1), I32, np.array([0]), np.array([0]), np.array([0], dtype=np.int32))


def test_arrays_are_read_only():
    m = canonicalize_coo([(0, 0, 1)], Dims(1, 1), I32)
    with pytest.raises(ValueError):
        m.values[0] = 3


def test_coo_to_dense_examples():
    assert coo_to_dense(canonicalize_coo([], Dims(2, 2), I32)).values.tolist() == [[0, 0], [0, 0]]
    assert coo_to_dense(canonicalize_coo([(1, 0, 9)], Dims(2, 1), I32)).values.tolist() == [[0], [9]]
    ident = canonicalize_coo([(0, 0, 1), (1, 1, 1)], Dims(2, 2), I32)
    assert coo_to_dense(ident).values.tolist() == [[1, 0], [0, 1]]


def test_coo_equal_examples():
    ident = canonicalize_coo([(0, 0, 1), (1, 1, 1)], Dims(2, 2), I32)
    zero = canonicalize_coo([], Dims(2, 2), I32)
    assert coo_equal(ident, ident)
    assert not coo_equal(ident, zero)
    swapped = canonicalize_coo([(1, 1, 1), (0, 0, 1)], Dims(2, 2), I32)
    assert coo_equal(ident, swapped)
    with pytest.raises(TypeError):
        coo_equal(ident, canonicalize_coo([], Dims(2, 2), U8))


def test_coo_equal_is_bitwise():
    a = canonicalize_coo([(0, 0, float("nan"))], Dims(1, 1), FLOAT64)
    assert coo_equal(a, a)


@given(coo_matrices())
def test_canonicalize_idempotent(m):
    again = canonicalize_coo(m.triplets, m.dims, m.value_kind)
    assert coo_equal(again, m)


@given(coo_matrices(), st.randoms(use_true_random=False))
def test_permutation_invariance(m, rnd):
    trips = m.triplets
    rnd.shuffle(trips)
    assert coo_equal(canonicalize_coo(trips, m.dims, m.value_kind), m)


@given(coo_matrices())
def test_dense_round_trip(m):
    d = coo_to_dense(m)
    assert d.values.tolist() == dense_lists(m)
    assert coo_equal(dense_to_coo(d, m.value_kind), m)

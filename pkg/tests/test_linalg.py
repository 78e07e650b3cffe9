from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qorbifold import (
    EchelonBasis,
    Matrix,
    QScalar,
    ScalarDivisionError,
    gram_schmidt,
    inverse,
    nullspace,
    q_int,
    rank,
)
from qorbifold.linalg import inner

entries = st.integers(-3, 3)
square = st.integers(1, 3).flatmap(
    lambda n: st.lists(st.lists(entries, min_size=n, max_size=n), min_size=n, max_size=n)
)


def test_zero_entries_are_not_stored():
    m = Matrix(2, 2, {(0, 0): 0, (1, 1): 5})
    assert m.nnz() == 1
    assert m[0, 0] == 0
    with pytest.raises(IndexError):
        Matrix(2, 2, {(2, 0): 1})


def test_product_and_adjoint():
    i = QScalar.zeta(1, 4)
    m = Matrix.from_rows([[1, i], [0, 2]])
    assert (m @ Matrix.identity(2)) == m
    assert m.adjoint()[1, 0] == -i
    assert (m @ m.H)[0, 0] == 2


def test_shape_mismatch():
    with pytest.raises(ValueError):
        Matrix(2, 3) @ Matrix(2, 3)
    with pytest.raises(ValueError):
        Matrix(2, 3) + Matrix(3, 2)


def test_kron_index_convention():
    a = Matrix.from_rows([[1, 2], [3, 4]])
    b = Matrix.identity(2)
    k = a.kron(b)
    assert k[2, 0] == 3
    assert k[3, 1] == 3
    assert k[2, 1] == 0


def test_inverse_with_q_entries():
    m = Matrix.from_rows([[q_int(2), 1], [1, q_int(2)]])
    assert m @ inverse(m) == Matrix.identity(2)


def test_singular_inverse():
    with pytest.raises(ScalarDivisionError):
        inverse(Matrix.from_rows([[1, 2], [2, 4]]))
    with pytest.raises(ScalarDivisionError):
        inverse(Matrix(2, 3))


def test_nullspace_is_kernel():
    m = Matrix.from_rows([[1, 2, 3], [2, 4, 6]])
    kernel = nullspace(m)
    assert len(kernel) == 2
    assert all(not m.apply(v) for v in kernel)
    assert rank(m) == 1


def test_echelon_basis():
    basis = EchelonBasis()
    assert basis.add({0: QScalar(1), 1: QScalar(1)})
    assert basis.add({1: QScalar(2)})
    assert not basis.add({0: QScalar(3)})
    assert basis.contains({0: QScalar(1)})
    assert len(basis) == 2


def test_gram_schmidt_orthogonal():
    vectors = [{0: QScalar(1), 1: QScalar(1)}, {0: QScalar(1)}, {1: QScalar(1)}]
    out = gram_schmidt(vectors)
    assert len(out) == 2
    assert inner(out[0], out[1]) == 0


def test_numeric_evaluation():
    m = Matrix.diagonal([q_int(2), QScalar.zeta(1, 2)])
    assert np.allclose(m.evaluate(0.25), np.diag([4.25, -1]))
    assert np.allclose(m.classical(), np.diag([2, -1]))


@given(square)
def test_rank_matches_numpy(rows):
    m = Matrix.from_rows(rows)
    assert rank(m) == np.linalg.matrix_rank(np.array(rows, dtype=float))


@given(square)
def test_inverse_when_regular(rows):
    m = Matrix.from_rows(rows)
    if rank(m) == len(rows):
        assert inverse(m) @ m == Matrix.identity(len(rows))
    else:
        with pytest.raises(ScalarDivisionError):
            inverse(m)

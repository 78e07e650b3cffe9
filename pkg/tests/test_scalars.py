from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from qorbifold import (
    EvaluationError,
    PoleAtOne,
    QScalar,
    ScalarDivisionError,
    UnrepresentableSqrt,
    classical_limit,
    eval_numeric,
    q_binom,
    q_int,
)

laurent = st.dictionaries(st.integers(-4, 4), st.integers(-3, 3), max_size=3).map(QScalar.laurent)
phased = st.builds(lambda x, j: x * QScalar.zeta(j, 3), laurent, st.integers(0, 2))
scalars = st.one_of(laurent, phased)


def test_q_int_is_symmetric_laurent():
    assert q_int(2) == QScalar.laurent({2: 1, -2: 1})
    assert q_int(3) == QScalar.laurent({4: 1, 0: 1, -4: 1})
    assert q_int(-3) == -q_int(3)
    assert q_int(0) == 0


def test_q_int_symmetrizer():
    assert q_int(2, d=2) == QScalar.laurent({4: 1, -4: 1})


def test_q_binomial_classical_limit():
    assert q_binom(4, 2) == q_int(4) * q_int(3) / q_int(2)
    assert classical_limit(q_binom(4, 2)) == 6
    assert classical_limit(q_int(5)) == 5


def test_roots_of_unity():
    i = QScalar.zeta(1, 4)
    assert i * i == -1
    assert i ** 4 == 1
    assert QScalar.zeta(2, 6) == QScalar.zeta(1, 3)
    assert QScalar.zeta(1, 3) + QScalar.zeta(2, 3) == -1


def test_conj():
    z = QScalar.zeta(1, 5)
    assert z.conj() == QScalar.zeta(4, 5)
    root = QScalar(2).sqrt()
    assert root.conj() == root
    assert (z * root).conj() * (z * root) == 2


def test_sqrt_squares_back(s):
    x = QScalar.rational_function({4: 1}, {4: 1, 0: 1})
    assert x.sqrt() ** 2 == x
    assert QScalar(Fraction(9, 4)).sqrt() == Fraction(3, 2)
    assert (s ** 2).sqrt() == s


def test_sqrt_of_sum_is_unrepresentable():
    with pytest.raises(UnrepresentableSqrt):
        QScalar.laurent({0: 1, 2: 1}).sqrt()
    with pytest.raises(UnrepresentableSqrt):
        QScalar(2).sqrt().sqrt()


def test_inverse_of_radical_sum():
    x = QScalar(1) + QScalar(2).sqrt()
    assert x * x.inv() == 1
    y = QScalar(1) + QScalar.zeta(1, 3)
    assert y * y.inv() == 1


def test_division_by_zero():
    with pytest.raises(ScalarDivisionError):
        QScalar().inv()
    with pytest.raises(ZeroDivisionError):
        QScalar(1) / 0
    with pytest.raises(ScalarDivisionError):
        QScalar.rational_function({0: 1}, {})


def test_eval_numeric():
    assert eval_numeric(q_int(2), 0.25) == pytest.approx(4.25)
    assert eval_numeric(QScalar.zeta(1, 4), 0.5) == pytest.approx(1j)
    with pytest.raises(EvaluationError):
        eval_numeric(q_int(2), 1.0)


def test_complex_needs_constant(s):
    assert complex(QScalar.zeta(1, 2)) == pytest.approx(-1)
    with pytest.raises(EvaluationError):
        complex(s)


def test_pole_at_one():
    with pytest.raises(PoleAtOne):
        classical_limit(QScalar.rational_function({0: 1}, {0: 1, 2: -1}))


def test_json_payload_restores_value():
    x = QScalar.rational_function({2: 3}, {0: 1, 4: 1}) * QScalar.zeta(1, 6) + QScalar(3).sqrt()
    assert QScalar.from_json(x.to_json()) == x


def test_unhashable():
    with pytest.raises(TypeError):
        hash(QScalar(1))


@given(scalars, scalars, scalars)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@given(scalars)
def test_inverse(a):
    assume(not a.is_zero())
    assert a * a.inv() == 1


@given(scalars)
def test_conj_is_involution(a):
    assert a.conj().conj() == a


@given(laurent, st.sampled_from([0.3, 0.5, 0.9]))
def test_evaluation_is_additive(a, q):
    assert eval_numeric(a + a, q) == pytest.approx(2 * eval_numeric(a, q))

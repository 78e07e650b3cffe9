from __future__ import annotations

import pytest

from qorbifold import (
    ActionError,
    CoordAlgebra,
    CrossedProduct,
    GroupMismatch,
    QScalar,
    act,
    check_effective_faithful,
    multiplication_table,
    parse_preset,
    verify_crossed_product,
)
from qorbifold.crossedprod import is_effective, represent_varpi


@pytest.fixture(scope="module")
def action():
    return parse_preset("teardrop:1,3:p=3")


@pytest.fixture(scope="module")
def ctx(action):
    return CrossedProduct(action, CoordAlgebra("su2", 4))


def test_needs_finite_group():
    with pytest.raises(ActionError):
        CrossedProduct(parse_preset("teardrop:1,3"))


def test_algebra_must_match(action):
    with pytest.raises(GroupMismatch):
        CrossedProduct(action, CoordAlgebra("su3", 1))


def test_residues_are_reduced(ctx):
    alpha = ctx.algebra.generators()["alpha"]
    element = ctx.element({(4,): alpha})
    assert [g for g, _ in element.parts()] == [(1,)]
    assert ctx.element({(1,): alpha, (4,): -alpha}).is_zero()


def test_group_acts_by_conjugation(ctx, action):
    alpha = ctx.algebra.generators()["alpha"]
    sigma = ctx.group_element((1,))
    sigma_inv = ctx.group_element((2,))
    lhs = sigma * ctx.coordinate_element(alpha) * sigma_inv
    assert lhs == ctx.coordinate_element(alpha.scale(QScalar.zeta(2, 3)))
    assert lhs == ctx.coordinate_element(act(action, (1,), alpha))


def test_product_twists_right_factor(ctx):
    alpha, beta = ctx.algebra.generators()["alpha"], ctx.algebra.generators()["beta"]
    product = ctx.element({(1,): alpha}) * ctx.element({(2,): beta})
    # beta has charge 3, fixed by the cyclic group
    assert product == ctx.element({(0,): alpha * beta})


def test_star(ctx):
    sigma = ctx.group_element((1,))
    assert sigma.star() == ctx.group_element((2,))
    assert sigma * sigma.star() == ctx.unit()
    beta = ctx.coordinate_element(ctx.algebra.generators()["beta"])
    x = sigma * beta
    assert x.star().star() == x


def test_varpi_of_group_element_is_diagonal(ctx):
    rep = represent_varpi(ctx.group_element((1,)), cutoff=1)
    assert rep.matrix.is_diagonal()
    assert not any(rep.overflow)
    assert rep.matrix[0, 0] == 1


def test_effectiveness():
    assert is_effective(parse_preset("teardrop:1,3:p=3")) == (True, None)
    assert is_effective(parse_preset("wpp:2,2:p=2")) == (False, (1,))


def test_effective_faithful_report(action):
    report = check_effective_faithful(action, cutoff=1)
    assert report.passed, [c.name for c in report.failures()]
    assert report.get("varpi-linearly-independent").detail["matrices"] == 3 * 5
    assert report.get("varpi-linearly-independent").detail["rank"] == 15
    assert report.get("varpi-linearly-independent").detail["span"] == 2


def test_varpi_needs_room_for_products(action):
    ctx = CrossedProduct(action, CoordAlgebra("su2", 2))
    x = ctx.basis_element((1,), ctx.algebra.basis(1)[1])
    narrow = represent_varpi(x, 1)
    wide = represent_varpi(x, 2)
    # level one columns leave the level one span, but stay inside level two
    assert any(narrow.overflow[1:5])
    assert not any(wide.overflow[:5])


def test_not_effective_report():
    report = check_effective_faithful(parse_preset("wpp:2,2:p=2"), cutoff=0)
    assert not report.get("effective").passed


def test_verify_crossed_product(action):
    report = verify_crossed_product(action, cutoff=1)
    assert report.passed, [c.name for c in report.failures()]


def test_multiplication_table(action):
    rows = multiplication_table(action, cutoff=0)
    assert len(rows) == 9
    assert rows[0]["product"] == [{"group": [0], "element": CoordAlgebra("su2", 0).unit().to_json()}]

from __future__ import annotations

import pytest

from qorbifold import (
    CoordAlgebra,
    CutoffOverflow,
    Matrix,
    MatrixCoeff,
    QScalar,
    RepresentationError,
    TensorElement,
    UqMonomial,
    WordLengthExceeded,
    audit_product_placement,
    generators,
    verify_hopf,
    verify_su2_relations,
    verify_su3_relations,
)
from qorbifold.repcat import A1


def test_basis_counts(su2, su3):
    assert len(su2.basis(1)) == 5
    assert len(su3.basis(1)) == 1 + 9 + 9 + 64
    assert su2.basis(0) == [MatrixCoeff((0,), 0, 0)]


def test_basis_is_ordered_by_depth(su3):
    weights = []
    for t in su3.basis(1):
        if t.weight not in weights:
            weights.append(t.weight)
    assert weights == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_coefficient_validation(su2):
    with pytest.raises(RepresentationError):
        su2.coefficient((1,), 2, 0)
    with pytest.raises(RepresentationError):
        su2.coefficient((1, 0), 0, 0)
    with pytest.raises(ValueError):
        CoordAlgebra("su2", cutoff=-1)
    with pytest.raises(ValueError):
        CoordAlgebra("su2", placement="diagonal")


def test_unit_is_neutral(su2):
    gens = su2.generators()
    for x in gens.values():
        assert su2.unit() * x == x
        assert x * su2.unit() == x


def test_counit_and_coproduct(su2):
    alpha, beta = su2.generators()["alpha"], su2.generators()["beta"]
    assert su2.counit(alpha) == 1
    assert su2.counit(beta) == 0
    delta = alpha.coproduct()
    assert delta.length == 2
    assert [key for key, _ in delta.terms()] == [
        (MatrixCoeff((1,), 0, 0), MatrixCoeff((1,), 0, 0)),
        (MatrixCoeff((1,), 0, 1), MatrixCoeff((1,), 1, 0)),
    ]


def test_pairing_with_cartan(su2):
    alpha = su2.generators()["alpha"]
    k = UqMonomial.parse(A1, "k1")
    assert alpha.pair(k) == QScalar.s_power(1)
    assert alpha.pair(UqMonomial(A1)) == 1
    assert su2.generators()["beta"].pair(UqMonomial.parse(A1, "e1")) == 1


def test_cutoff_overflow():
    algebra = CoordAlgebra("su2", cutoff=1, persist=False)
    alpha = algebra.generators()["alpha"]
    with pytest.raises(CutoffOverflow):
        alpha * alpha
    assert algebra.multiply(alpha, alpha, limit=2)


def test_star_is_involutive(su2, su3):
    for algebra in (su2, su3):
        for x in algebra.generators().values():
            assert x.star().star() == x


def test_product_placement_audit():
    placement, outcome = audit_product_placement(2)
    assert outcome[placement]
    report = verify_su2_relations(CoordAlgebra("su2", 2, placement, persist=False))
    assert report.passed, [c.name for c in report.failures()]


def test_hopf_su2():
    report = verify_hopf(CoordAlgebra("su2", 2, persist=False))
    assert report.passed, [c.name for c in report.failures()]


def test_su3_relations_use_one_orientation(su3):
    report = verify_su3_relations(su3)
    assert report.config["orientation"] == "standard"
    assert sum(report.config["family_counts"].values()) == 9 + 9 + 9 + 9
    family_checks = [c for c in report.checks if c.name.startswith("F")]
    assert len(family_checks) == 36
    for c in family_checks:
        assert c.passed or c.witness["orientation"] == "standard"
    assert report.get("unit-relation").passed
    assert report.config["unit_relation_orientations"] == ["standard"]


def test_su3_orientation_mismatch_is_reported(su3):
    report = verify_su3_relations(su3)
    families = report.config["family_orientation"]
    consistent = report.get("single-convention")
    # the families hold verbatim only with the product reversed
    assert families == "reversed"
    assert not consistent.passed
    assert consistent.witness == {"families": "reversed", "unit_relation": ["standard"]}
    assert not report.passed
    for c in report.checks:
        if c.name.startswith("F3/"):
            assert c.passed
        elif c.name.startswith(("F1/", "F2/", "F4/")):
            assert not c.passed and c.witness["holds_in"] == ["reversed"]
    assert report.notes


def test_named_generators():
    gens = generators("su3", cutoff=1)
    assert sorted(gens) == ["t11", "t12", "t13", "t21", "t22", "t23", "t31", "t32", "t33", "unit"]


def test_tensor_multiply_out(su2):
    alpha, beta = su2.generators()["alpha"], su2.generators()["beta"]
    chain = TensorElement.from_factors([alpha, beta])
    assert len(chain) == 1
    assert chain.multiply_out() == alpha * beta


def test_gns_matrix_of_unit(su2):
    gns = su2.gns_matrix(su2.unit(), cutoff=1)
    assert gns.matrix == Matrix.identity(5)
    assert gns.retained() == list(range(5))


def test_gns_matrix_flags_overflow(su2):
    gns = su2.gns_matrix(su2.generators()["alpha"], cutoff=1)
    assert gns.overflow == (False, True, True, True, True)
    assert gns.retained() == [0]
    assert gns.matrix[1, 0] == 1


def test_uq_monomials():
    word = UqMonomial.parse(A1, "e1 k1^-1 f1")
    assert str(word) == "e1 k1^-1 f1"
    assert len(word.coproduct()) == 4
    with pytest.raises(WordLengthExceeded):
        UqMonomial(A1, [("k", 0)] * 9)
    with pytest.raises(RepresentationError):
        UqMonomial.parse(A1, "e1^-1")
    with pytest.raises(RepresentationError):
        UqMonomial.parse(A1, "e2")


def test_left_and_right_actions_commute(su2):
    beta = su2.generators()["beta"]
    e, f = UqMonomial.parse(A1, "e1"), UqMonomial.parse(A1, "f1")
    assert su2.left_action(e, su2.right_action(f, beta)) == su2.right_action(f, su2.left_action(e, beta))


def test_persisted_blocks(tmp_path, monkeypatch):
    monkeypatch.setenv("QORB_CACHE_DIR", str(tmp_path))
    first = CoordAlgebra("su2", 2)
    alpha, beta = first.generators()["alpha"], first.generators()["beta"]
    product = alpha * beta
    assert list(tmp_path.glob("cg-A1-1-1.json"))

    second = CoordAlgebra("su2", 2)
    again = second.generators()["alpha"] * second.generators()["beta"]
    assert dict(again.terms()) == dict(product.terms())

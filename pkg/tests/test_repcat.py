from __future__ import annotations

import pytest

from qorbifold import (
    A1,
    A2,
    Matrix,
    NotASummand,
    QScalar,
    Rep,
    RootDatumMismatch,
    UnknownRepresentation,
    builtin_rep,
    canonical_irrep,
    clebsch_gordan,
    decompose,
    dual,
    highest_weight_vectors,
    q_int,
    run_suite,
    tensor,
    tensor_decomposition,
    verify_defining_relations,
)
from qorbifold.suites import load_cg_golden


@pytest.mark.parametrize("name", ["su2:1", "su2:2", "su2:3", "su3:λ1", "su3:λ1v", "su3:λ2"])
def test_builtin_relations(name):
    report = verify_defining_relations(builtin_rep(name))
    assert report.passed, report.failures()


def test_builtin_aliases():
    assert builtin_rep("su2:1/2").dimension == 2
    assert builtin_rep("su3:l2").dimension == 6
    assert builtin_rep("trivial").dimension == 1
    assert builtin_rep("su3:trivial").root_datum == A2


@pytest.mark.parametrize("name", ["su2:1/3", "su2:x", "su4:λ1", "su3:λ3", "nothing"])
def test_unknown_modules(name):
    with pytest.raises(UnknownRepresentation):
        builtin_rep(name)


def test_su2_lowering_entries():
    f = builtin_rep("su2:2").f[0]
    root = q_int(2).sqrt()
    assert f[1, 0] == root
    assert f[2, 1] == root


def test_star_structure():
    assert builtin_rep("su3:λ2").is_star()
    assert canonical_irrep(A2, (1, 1)).is_star()


def test_tensor_needs_same_root_datum():
    with pytest.raises(RootDatumMismatch):
        tensor(builtin_rep("su2:1"), builtin_rep("su3:λ1"))


def test_tensor_relations_and_weights():
    product = tensor(builtin_rep("su2:1"), builtin_rep("su2:2"))
    assert product.dimension == 6
    assert verify_defining_relations(product).passed
    assert sorted(w for w, _ in highest_weight_vectors(product)) == [(1,), (3,)]


def test_dual_of_fundamental():
    r = dual(builtin_rep("su3:λ1"))
    assert verify_defining_relations(r).passed
    assert sorted(r.weights) == sorted(builtin_rep("su3:λ1v").weights)


@pytest.mark.parametrize("weight,dimension", [((1, 0), 3), ((0, 1), 3), ((1, 1), 8), ((2, 0), 6), ((2, 1), 15)])
def test_canonical_su3_dimensions(weight, dimension):
    rep = canonical_irrep(A2, weight)
    assert rep.dimension == dimension
    assert rep.weights[0] == weight
    assert verify_defining_relations(rep).passed


def test_canonical_su2_matches_builtin():
    assert canonical_irrep(A1, (3,)).f[0] == builtin_rep("su2:3").f[0]


def test_adjoint_zero_weight_multiplicity():
    rep = canonical_irrep(A2, (1, 1))
    assert rep.weight_multiset()[(0, 0)] == 2


@pytest.mark.parametrize("left,right", [((1,), (1,)), ((2,), (1,)), ((1, 0), (1, 0)), ((1, 0), (0, 1))])
def test_tensor_decomposition_blocks_are_isometric_intertwiners(left, right):
    rd = A1 if len(left) == 1 else A2
    product = tensor(canonical_irrep(rd, left), canonical_irrep(rd, right))
    blocks = tensor_decomposition(rd, left, right)
    assert sum(b.dimension for b in blocks) == product.dimension
    for block in blocks:
        assert block.verify(product).passed


def test_blocks_are_mutually_orthogonal():
    blocks = tensor_decomposition(A2, (1, 0), (0, 1))
    assert [b.weight for b in blocks] == [(1, 1), (0, 0)]
    assert (blocks[0].matrix.adjoint() @ blocks[1].matrix).is_zero()


def test_su2_clebsch_gordan_singlet():
    # spin one half squared: singlet is (q^(1/2) v1 w2 - q^(-1/2) v2 w1) / sqrt([2])
    s = QScalar.s_power(1)
    norm = q_int(2).sqrt()
    assert clebsch_gordan((1,), (1,), (0,), 1, 2, 1) == s / norm
    assert clebsch_gordan((1,), (1,), (0,), 2, 1, 1) == -s.inv() / norm


def test_clebsch_gordan_missing_summand():
    with pytest.raises(NotASummand):
        clebsch_gordan((1, 0), (1, 0), (1, 1), 1, 1, 1)


def test_adjoint_square_has_two_adjoint_summands():
    product = tensor(canonical_irrep(A2, (1, 1)), canonical_irrep(A2, (1, 1)))
    found = [w for w, _ in highest_weight_vectors(product)]
    assert found.count((1, 1)) == 2
    assert found.count((0, 0)) == 1


def test_decompose_orders_blocks_by_weight():
    product = tensor(builtin_rep("su2:1"), builtin_rep("su2:1"))
    assert [(b.weight, b.copy) for b in decompose(product)] == [((2,), 0), ((0,), 0)]


def test_golden_table_shape():
    golden = load_cg_golden()
    assert golden["group"] == "su3"
    summands = {tuple(e["summand"]) for e in golden["entries"]}
    assert summands == {(0, 1), (2, 0)}
    assert len(golden["entries"]) == 15


def test_golden_suite():
    report = run_suite("cg-golden")
    assert report.passed, [c.name for c in report.failures()]
    assert report.config["block_signs"] == {"0,1": 1, "2,0": 1}


def test_matrix_rep_json_payload():
    rep = builtin_rep("su3:λ2")
    data = rep.to_json()
    assert data["dimension"] == 6
    assert set(data["generators"]) == {"e1", "e2", "f1", "f2"}
    assert Rep.from_json(data).e[1] == rep.e[1]


def test_module_words():
    rep = builtin_rep("su2:1")
    assert rep.word_matrix((("e", 0), ("f", 0))) == Matrix(2, 2, {(0, 0): 1})

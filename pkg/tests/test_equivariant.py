from __future__ import annotations

from fractions import Fraction

import pytest

from qorbifold import (
    Cochain,
    CoordAlgebra,
    DegreeMismatch,
    EquivariantProjector,
    GroupMismatch,
    InvariantChain,
    ProjectorError,
    QScalar,
    TensorElement,
    chern_character,
    conjugate_projector,
    conjugation_intertwiners,
    corep_column_projector,
    cyclic_lambda,
    hochschild_b,
    pair_chain,
    parse_preset,
    run_suite,
    trivial_projector,
)
from qorbifold.equivariant import check_equivalence


@pytest.fixture(scope="module")
def action():
    return parse_preset("teardrop:1,3")


@pytest.fixture(scope="module")
def projector(action, su2):
    return corep_column_projector(action, algebra=su2)


def test_column_projector_is_equivariant(projector):
    assert projector.dimension == 2
    assert projector.charges == ((Fraction(-1),), (Fraction(-3),))
    assert projector.expected_charge(0, 1) == (Fraction(2),)
    report = projector.verify()
    assert report.passed, [c.name for c in report.failures()]


def test_column_out_of_range(action, su2):
    with pytest.raises(ProjectorError):
        corep_column_projector(action, column=2, algebra=su2)


def test_declared_charges_must_match(action, su2):
    shifted = corep_column_projector(action, charges=[(5,), (3,)], algebra=su2)
    assert shifted.verify().passed
    with pytest.raises(ProjectorError):
        corep_column_projector(action, charges=[(0,), (0,)], algebra=su2)
    with pytest.raises(ProjectorError):
        corep_column_projector(action, charges=[(0,)], algebra=su2)


def test_wrong_charges_fail_invariance(projector):
    p = EquivariantProjector(projector.action, projector.algebra, [(0,), (0,)], projector.entries)
    report = p.verify()
    assert report.get("idempotent").passed
    assert not report.get("invariant").passed
    assert report.get("invariant").witness["entry"] in ((0, 1), (1, 0))


def test_projector_shape_checks(action, su2):
    with pytest.raises(ProjectorError):
        EquivariantProjector(action, su2, [(0,), (0,)], [[su2.unit()]])
    with pytest.raises(ProjectorError):
        EquivariantProjector(action, su2, [(0, 0)], [[su2.unit()]])
    with pytest.raises(GroupMismatch):
        EquivariantProjector(action, CoordAlgebra("su3", 1), [(0,)], [[su2.unit()]])


def test_trivial_projector(action, su2):
    p = trivial_projector(action, 3, su2)
    assert p.verify().passed
    assert chern_character(p, 0) == InvariantChain.from_element(action, su2.unit())
    with pytest.raises(ProjectorError):
        trivial_projector(action, 0, su2)


@pytest.mark.parametrize("degree", [-2, 1, 3])
def test_chern_needs_even_degree(projector, degree):
    with pytest.raises(DegreeMismatch):
        chern_character(projector, degree)


def test_ch0_is_the_trace(projector, action):
    ch0 = chern_character(projector, 0)
    assert ch0.degree == 0
    assert ch0.is_invariant()
    assert ch0 == InvariantChain.from_element(action, projector.trace())
    assert ch0.nonlocal_witness() is None


def test_ch2_is_invariant_but_not_local(projector):
    ch2 = chern_character(projector, 2)
    assert ch2.degree == 2
    assert ch2.is_invariant()
    assert ch2.non_invariant() == []
    witness = ch2.nonlocal_witness()
    assert witness is not None
    charges = ch2.factor_charges(witness)
    assert sum(c[0] for c in charges) == 0
    assert any(c[0] != 0 for c in charges)
    payload = ch2.to_json()
    assert payload["invariant"] is True
    assert all(term["total_charge"] == ["0"] for term in payload["terms"])


def test_chain_degree_mismatch(action, su2):
    alpha = su2.generators()["alpha"]
    tensor = TensorElement.from_factors([alpha, alpha])
    with pytest.raises(DegreeMismatch):
        InvariantChain(action, tensor, 2)
    chain = InvariantChain(action, tensor)
    assert chain.degree == 1
    assert not chain.is_invariant()


def test_conjugation_gives_equivalent_projector(projector):
    phases = [QScalar.zeta(1, 4), QScalar(1)]
    conjugate = conjugate_projector(projector, phases)
    assert conjugate.verify().passed
    assert conjugate.entries[0][0] == projector.entries[0][0]
    assert conjugate.entries[0][1] == projector.entries[0][1].scale(QScalar.zeta(1, 4))
    gamma, gamma_prime = conjugation_intertwiners(projector, phases)
    report = check_equivalence(projector, conjugate, gamma, gamma_prime)
    assert report.passed, [c.name for c in report.failures()]


def test_conjugation_needs_unit_phases(projector):
    with pytest.raises(ProjectorError):
        conjugate_projector(projector, [2, 1])
    with pytest.raises(ProjectorError):
        conjugate_projector(projector, [1])


def test_equivalence_rejects_bad_shapes(projector):
    gamma, _ = conjugation_intertwiners(projector, [1, 1])
    with pytest.raises(ProjectorError):
        check_equivalence(projector, projector, gamma, gamma[:1])


def test_equivalence_detects_wrong_intertwiner(projector):
    gamma, gamma_prime = conjugation_intertwiners(projector, [1, 1])
    zero = projector.algebra.zero()
    report = check_equivalence(projector, projector, [[zero, zero], [zero, zero]], gamma_prime)
    assert not report.get("gamma-gamma'-is-p'").passed
    assert report.get("gamma-invariant").passed


def test_dual_basis_cochain(su2):
    basis = su2.basis(1)
    monomial = (basis[1], basis[2])
    rho = Cochain.dual_basis(su2, monomial)
    assert rho.degree == 1
    assert rho.is_finite
    assert rho.support() == [monomial]
    assert rho.value(monomial) == QScalar(1)
    assert rho.value((basis[2], basis[1])) == QScalar(0)
    with pytest.raises(DegreeMismatch):
        rho.value((basis[1],))


def test_cochain_arithmetic(su2):
    basis = su2.basis(1)
    a = Cochain.dual_basis(su2, (basis[1],))
    b = Cochain.dual_basis(su2, (basis[2],))
    total = (a + b.scale(3)).scale(2)
    assert total.value((basis[1],)) == QScalar(2)
    assert total.value((basis[2],)) == QScalar(6)
    with pytest.raises(DegreeMismatch):
        a + Cochain.dual_basis(su2, (basis[1], basis[1]))


def test_cochain_construction_errors(su2):
    with pytest.raises(ValueError):
        Cochain(su2, 0)
    with pytest.raises(DegreeMismatch):
        Cochain(su2, -1, {})
    lazy = hochschild_b(Cochain.dual_basis(su2, (su2.basis(0)[0],)))
    assert not lazy.is_finite
    with pytest.raises(ProjectorError):
        lazy.support()


def test_pairing(projector, su2):
    ch0 = chern_character(projector, 0)
    counting = Cochain.from_rule(su2, 0, lambda m: 1, [m for m, _ in ch0.terms()])
    assert pair_chain(counting, ch0) == sum((c for _, c in ch0.terms()), QScalar())
    with pytest.raises(DegreeMismatch):
        pair_chain(counting, chern_character(projector, 2))


def test_b_squared_vanishes(su2):
    sigma = Cochain.from_rule(su2, 0, lambda m: m[0].row - m[0].col + 1, su2.basis(2))
    bb = hochschild_b(hochschild_b(sigma))
    assert bb.degree == 2
    level_one = su2.basis(1)[1:]
    for a in level_one:
        for b in level_one[:2]:
            assert bb.value((a, b, a)) == QScalar(0)


def test_cyclic_lambda_has_order_k_plus_one(su2):
    basis = su2.basis(1)
    monomial = (basis[1], basis[2], basis[3])
    rho = Cochain.dual_basis(su2, monomial)
    once = cyclic_lambda(rho)
    assert once.support() == [(basis[2], basis[3], basis[1])]
    assert once.value((basis[2], basis[3], basis[1])) == QScalar(1)
    cycled = rho
    for _ in range(3):
        cycled = cyclic_lambda(cycled)
    assert cycled.support() == rho.support()
    assert cycled.value(monomial) == QScalar(1)


def test_odd_degree_lambda_sign(su2):
    basis = su2.basis(1)
    rho = Cochain.dual_basis(su2, (basis[1], basis[2]))
    assert cyclic_lambda(rho).value((basis[2], basis[1])) == QScalar(-1)


def test_restrict_keeps_invariant_monomials(action, su2):
    basis = su2.basis(1)
    values = {(t,): 1 for t in basis}
    restricted = Cochain(su2, 0, values).restrict(action)
    # only the unit is fixed by the circle at this level
    assert restricted.support() == [(basis[0],)]


def test_chern_suite():
    report = run_suite("chern")
    assert report.passed, [c.name for c in report.failures()]

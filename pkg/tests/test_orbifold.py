from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qorbifold import (
    A1,
    A2,
    ActionError,
    ActionSpec,
    CoordAlgebra,
    Factor,
    InvalidPreset,
    IrrationalAngle,
    MatrixCoeff,
    QScalar,
    act,
    charge_of,
    charge_table,
    enumerate_su3_actions,
    family_action,
    in_action_family,
    invariant_basis,
    parse_preset,
    run_suite,
    scan_su3_actions,
    shift_by_center,
    validate_action,
)
from qorbifold.orbifold import element_charges
from qorbifold.suites import ADJOINT_CHARGES


@pytest.fixture(scope="module")
def teardrop():
    return parse_preset("teardrop:1,3")


def test_teardrop_generator_charges(teardrop):
    assert charge_of(teardrop, MatrixCoeff((1,), 0, 0)) == (-1,)
    assert charge_of(teardrop, MatrixCoeff((1,), 0, 1)) == (3,)
    assert charge_of(teardrop, MatrixCoeff((1,), 1, 0)) == (-3,)
    assert charge_of(teardrop, MatrixCoeff((1,), 1, 1)) == (1,)


def test_teardrop_spellings_agree(teardrop):
    assert parse_preset("teardrop:3") == teardrop


def test_invariant_basis_teardrop(teardrop):
    assert invariant_basis(teardrop, 2) == [MatrixCoeff((0,), 0, 0), MatrixCoeff((2,), 1, 1)]


def test_invariant_basis_sphere():
    found = invariant_basis(parse_preset("sphere"), 2)
    assert found == [MatrixCoeff((0,), 0, 0)] + [MatrixCoeff((2,), a, 1) for a in range(3)]


def test_cyclic_restriction_enlarges_invariants(teardrop):
    restricted = parse_preset("teardrop:1,3:p=3")
    assert restricted.group.orders == (3,)
    assert len(invariant_basis(restricted, 2)) > len(invariant_basis(teardrop, 2))
    assert MatrixCoeff((1,), 0, 1) in invariant_basis(restricted, 1)


def test_lens_needs_prime_order():
    assert parse_preset("lens:3,5").group.orders == (5,)
    with pytest.raises(InvalidPreset):
        parse_preset("lens:3,4")


@pytest.mark.parametrize(
    "preset",
    ["", "torus", "wpp:1", "wpp:0,2", "teardrop:2,3", "teardrop:x", "sphere:1", "su3-adjoint:2", "su3-prop5:3", "trivial:su5"],
)
def test_invalid_presets(preset):
    with pytest.raises(InvalidPreset):
        parse_preset(preset)


def test_trivial_preset_fixes_everything():
    action = parse_preset("trivial:su3")
    algebra = CoordAlgebra("su3", 1)
    assert invariant_basis(action, algebra) == algebra.basis()


def test_act_on_generators(su2, teardrop):
    alpha, beta = su2.generators()["alpha"], su2.generators()["beta"]
    assert act(teardrop, (Fraction(1, 4),), alpha) == alpha.scale(QScalar.zeta(3, 4))
    assert act(teardrop, (Fraction(1, 3),), beta) == beta
    lens = parse_preset("lens:3,5")
    assert act(lens, (1,), beta) == beta.scale(QScalar.zeta(3, 5))


def test_act_rejects_bad_elements(su2, teardrop):
    alpha = su2.generators()["alpha"]
    with pytest.raises(IrrationalAngle):
        act(teardrop, (0.25,), alpha)
    with pytest.raises(ActionError):
        act(teardrop, (0, 0), alpha)
    with pytest.raises(ActionError):
        act(parse_preset("lens:3,5"), (Fraction(1, 2),), alpha)


def test_act_is_multiplicative(su2, teardrop):
    alpha, beta = su2.generators()["alpha"], su2.generators()["beta"]
    g = (Fraction(1, 6),)
    assert act(teardrop, g, alpha * beta) == act(teardrop, g, alpha) * act(teardrop, g, beta)


def test_adjoint_charge_table(su3):
    table = charge_table(parse_preset("su3-adjoint"), su3.generators())
    assert {name: tuple(int(c) for c in charge) for name, charge in table.items()} == ADJOINT_CHARGES


def test_charge_table_requires_homogeneous(su2, teardrop):
    gens = su2.generators()
    mixed = gens["alpha"] + gens["beta"]
    assert len(element_charges(teardrop, mixed)) == 2
    with pytest.raises(ActionError):
        charge_table(teardrop, {"mixed": mixed})


def test_validate_rejects_half_charges():
    valid, certificate = validate_action(ActionSpec(A1, [Factor((Fraction(1, 2),), (0,))]))
    assert not valid
    assert certificate["factor"] == 0
    assert certificate["charge"] == "1/2"


def test_validate_reports_central_residue():
    valid, certificate = validate_action(family_action(1))
    assert valid
    assert certificate["central_residue"] == [1]


def test_family_membership():
    assert in_action_family((Fraction(1, 3), Fraction(2, 3)), (Fraction(2, 3), Fraction(1, 3)), kbox=0)
    assert not in_action_family((Fraction(4, 3), Fraction(2, 3)), (Fraction(2, 3), Fraction(1, 3)), kbox=0)
    assert in_action_family((Fraction(4, 3), Fraction(2, 3)), (Fraction(2, 3), Fraction(1, 3)))
    assert not in_action_family((Fraction(1, 3), Fraction(1, 3)), (Fraction(2, 3), Fraction(1, 3)))
    with pytest.raises(ActionError):
        family_action(3)


def test_enumeration_size():
    assert len(enumerate_su3_actions(kbox=1)) == 3 * 3 ** 4
    assert len(enumerate_su3_actions((0,), kbox=0)) == 1


def test_scan_matches_family():
    in_window, outside = scan_su3_actions(kbox=1, denominator=3)
    assert outside == []
    family = {(a.factors[0].y1, a.factors[0].y2) for a in enumerate_su3_actions(kbox=1)}
    assert in_window == family


def test_center_shift_keeps_invariants(teardrop):
    shifted = shift_by_center(teardrop, 1)
    assert shifted.center == 1
    assert shifted != teardrop
    assert invariant_basis(shifted, 2) == invariant_basis(teardrop, 2)


def test_action_payload():
    data = parse_preset("su3-prop5:2,0,1,0,-1").to_json()
    assert data["group"] == "su3"
    assert data["factors"][0]["y1"] == ["2/3", "7/3"]
    assert data["factors"][0]["kind"] == "T"


@given(st.integers(0, 2), st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_family_members_are_valid(x, ks):
    action = family_action(x, *ks)
    assert validate_action(action)[0]
    assert in_action_family(action.factors[0].y1, action.factors[0].y2, kbox=3)


@given(st.tuples(*[st.fractions(min_value=-2, max_value=2, max_denominator=6)] * 4))
def test_validity_agrees_with_family(point):
    y1, y2 = point[:2], point[2:]
    valid, _ = validate_action(ActionSpec(A2, [Factor(y1, y2)]))
    assert valid == in_action_family(y1, y2)


def test_adjoint_table_suite():
    assert run_suite("adjoint-table").passed


def test_family_suite_small_box():
    from qorbifold.cli import RunConfig

    report = run_suite("prop5", RunConfig(kbox=1))
    assert report.passed, [c.name for c in report.failures()]

from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qorbifold import (
    NoChirality,
    RepresentationError,
    SpinError,
    SpinorModule,
    builtin_rep,
    central_offset,
    dirac_block,
    family_action,
    lift_exponents,
    lift_twist_window,
    parse_preset,
    run_suite,
    spin_lift_check,
)
from qorbifold.spin import LieAlgebraBasis, joint_weights
from qorbifold.suites import SPINOR_CARTAN_DIAGONALS


@pytest.fixture(scope="module")
def su3_spinor():
    return SpinorModule.for_algebra("su3")


@pytest.mark.parametrize("n", [2, 3])
def test_basis_is_killing_orthonormal(n):
    lie = LieAlgebraBasis.su(n)
    assert lie.dimension == n * n - 1
    assert np.allclose(lie.killing_matrix(), -np.eye(lie.dimension))


def test_su1_is_rejected():
    with pytest.raises(SpinError):
        LieAlgebraBasis.su(1)


def test_su3_spinor_module(su3_spinor):
    assert su3_spinor.dimension == 16
    assert su3_spinor.is_even
    assert su3_spinor.clifford_residual() < 1e-12
    assert su3_spinor.homomorphism_residual() < 1e-9
    assert su3_spinor.lie_residual() < 1e-9
    assert [b.shape for b in su3_spinor.blocks()] == [(16, 8), (16, 8)]


def test_su3_block_weights(su3_spinor):
    expected = [sorted(d) for d in SPINOR_CARTAN_DIAGONALS]
    for weights in su3_spinor.block_weights():
        assert [sorted(w[j] for w in weights) for j in range(2)] == expected


def test_su2_spinor_has_no_chirality():
    spinor = SpinorModule.for_algebra("su2")
    assert spinor.dimension == 2
    assert not spinor.is_even
    with pytest.raises(NoChirality):
        spinor.chirality()
    assert sorted(spinor.block_weights()[0]) == [(-1,), (1,)]


def test_joint_weights_must_be_integers():
    assert sorted(joint_weights([np.diag([2.0, -1.0])])) == [(-1,), (2,)]
    with pytest.raises(SpinError):
        joint_weights([np.diag([0.5, 1.0])])


@pytest.mark.parametrize("weight", [(0,), (1,), (2,)])
def test_dirac_blocks_su2(weight):
    block = dirac_block(weight)
    assert len(block.spectrum) == 2 * (weight[0] + 1)
    assert block.self_adjoint_residual < 1e-10
    assert block.commutation_residual < 1e-9
    assert block.oracle_residual < 1e-9


def test_dirac_block_su3():
    block = dirac_block((1, 0), group="su3")
    assert block.matrix.shape == (48, 48)
    assert block.oracle_residual < 1e-9


def test_dirac_block_needs_dominant_weight():
    with pytest.raises(RepresentationError):
        dirac_block((-1,))


def test_lift_exponents():
    action = parse_preset("wpp:1,2")
    assert lift_exponents(action, [(1,), (-1,)], 0) == [Fraction(-3, 2), Fraction(3, 2)]
    assert lift_exponents(action, [(1,)], 2) == [Fraction(1, 2)]


def test_lift_on_module():
    module = builtin_rep("su2:1")
    assert spin_lift_check(parse_preset("sphere"), (0,), module).passed
    report = spin_lift_check(parse_preset("wpp:1,2"), (0,), module)
    assert report.passed, [c.name for c in report.failures()]
    assert report.get("periodic/0/0").detail["offset"] == "1/2"


@pytest.mark.parametrize("preset", ["sphere", "wpp:1,2", "wpp:2,3", "teardrop:1,2", "teardrop:1,3", "teardrop:1,4"])
def test_su2_lift_passes_for_every_twist(preset):
    action = parse_preset(preset)
    window = range(-5, 6)
    assert lift_twist_window(action, window) == [(t,) for t in window]


@pytest.mark.parametrize("preset, offset", [("wpp:1,2", "1/2"), ("teardrop:1,2", "1/2"), ("teardrop:1,3", "0")])
def test_offset_follows_parity_of_l_plus_k(preset, offset):
    report = spin_lift_check(parse_preset(preset), (3,))
    assert report.passed
    assert report.get("periodic/0/0").detail["offset"] == offset
    assert report.get("full-turn/0/0").detail["residual"] < 1e-9


def test_central_offset():
    assert central_offset([Fraction(-3, 2), Fraction(3, 2)]) == Fraction(1, 2)
    assert central_offset([Fraction(2), Fraction(-1)]) == 0
    assert central_offset([Fraction(2, 3), Fraction(-1, 3)]) is None
    assert central_offset([Fraction(1, 2), Fraction(0)]) is None
    assert central_offset([]) == 0


@given(st.integers(-20, 20), st.lists(st.integers(-20, 20), min_size=1, max_size=6))
def test_central_offset_ignores_integer_shifts(shift, exponents):
    halves = [Fraction(2 * e + 1, 2) for e in exponents]
    assert central_offset(halves) == central_offset([h + shift for h in halves]) == Fraction(1, 2)


def test_lift_twist_count_must_match(su3_spinor):
    with pytest.raises(SpinError):
        spin_lift_check(family_action(1), (0,), su3_spinor)


def test_family_lifts_on_spinor_not_on_fundamental(su3_spinor):
    action = family_action(1)
    assert spin_lift_check(action, module=su3_spinor).passed
    report = spin_lift_check(action, module=builtin_rep("su3:λ1"))
    assert not report.get("periodic/0/0").passed
    assert report.get("periodic/0/0").witness["offsets"] == ["2/3"]
    # scalar twist per block, so conjugation agrees even without a lift
    assert report.get("conjugation/0/0").passed
    assert lift_twist_window(action, range(-2, 3), builtin_rep("su3:λ1")) == []


def test_sphere_window():
    assert lift_twist_window(parse_preset("sphere"), range(-2, 3)) == [(t,) for t in range(-2, 3)]


def test_spin_suite():
    from qorbifold.cli import RunConfig

    report = run_suite("spin-examples", RunConfig(twists=[-1, 0, 1]))
    assert report.passed, [c.name for c in report.failures()]


def test_dirac_suite():
    assert run_suite("dirac-blocks").passed

from __future__ import annotations

from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple, Union, TYPE_CHECKING
from fractions import Fraction
from itertools import product as cartesian
from math import lcm

import logging
import re

import numpy as np
from sympy import isprime

from .coordalg import CoordAlgebra, CoordElement, MatrixCoeff
from .errors import ActionError, InvalidPreset, IrrationalAngle, UnknownRepresentation
from .repcat import A1, A2, RootDatum, Weight, canonical_irrep, root_datum
from .scalars import QScalar

if TYPE_CHECKING:
    from .types.action import ActionPayload, CertificatePayload, FactorPayload

__all__ = (
    "Charge",
    "Factor",
    "GroupSpec",
    "ActionSpec",
    "central_generator",
    "charge_of",
    "central_phase",
    "element_charges",
    "act",
    "validate_action",
    "family_action",
    "in_action_family",
    "enumerate_su3_actions",
    "scan_su3_actions",
    "shift_by_center",
    "invariant_basis",
    "charge_table",
    "parse_preset",
    "PRESETS",
)

_log = logging.getLogger(__name__)

Charge = Tuple[Fraction, ...]
Rational = Union[int, Fraction]
# group element: one entry per factor; a turn (fraction of 2 pi) for T, a residue for Z_p
GroupElement = Tuple[Rational, ...]

# Cartan coordinates of the generator of Z(G) inside the torus, and |Z(G)|
_CENTER: Dict[str, Tuple[Tuple[Fraction, ...], int]] = {
    "A1": ((Fraction(1, 2),), 2),
    "A2": ((Fraction(1, 3), Fraction(2, 3)), 3),
}


def central_generator(rd: RootDatum) -> Tuple[Tuple[Fraction, ...], int]:
    """Cartan vector ``c`` with ``exp(2 pi i c.h)`` generating the center, and the center's order."""
    return _CENTER[rd.name]


def _dot(weight: Sequence[int], y: Sequence[Fraction]) -> Fraction:
    return sum((Fraction(w) * c for w, c in zip(weight, y)), Fraction(0))


def _as_fraction(value: object) -> Fraction:
    if isinstance(value, float):
        raise IrrationalAngle(f"floating point value {value!r} is not an exact rational")
    try:
        return Fraction(value)  # type: ignore
    except (TypeError, ValueError):
        raise ActionError(f"not a rational number: {value!r}") from None


class Factor:
    """One circle factor of the acting torus subgroup.

    Attributes
    ----------
    order: Optional[:class:`int`]
        ``None`` for a full circle, ``p`` for the cyclic subgroup of order ``p``.
    y1: Tuple[:class:`fractions.Fraction`, ...]
        Cartan coordinates of the left homomorphism.
    y2: Tuple[:class:`fractions.Fraction`, ...]
        Cartan coordinates of the right homomorphism.
    """

    __slots__ = ("order", "y1", "y2")

    def __init__(self, y1: Sequence[Rational], y2: Sequence[Rational], order: Optional[int] = None) -> None:
        if order is not None and order < 1:
            raise ActionError(f"cyclic factor order must be positive, not {order}")
        if len(y1) != len(y2):
            raise ActionError("y1 and y2 must have the same length")
        self.order = order
        self.y1 = tuple(_as_fraction(c) for c in y1)
        self.y2 = tuple(_as_fraction(c) for c in y2)

    @property
    def kind(self) -> str:
        return "T" if self.order is None else "Z"

    def restrict(self, order: int) -> Factor:
        return Factor(self.y1, self.y2, order)

    def to_json(self) -> FactorPayload:
        return {
            "kind": self.kind,  # type: ignore
            "order": self.order,
            "y1": [str(c) for c in self.y1],
            "y2": [str(c) for c in self.y2],
        }

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Factor) and (self.order, self.y1, self.y2) == (other.order, other.y1, other.y2)

    def __hash__(self) -> int:
        return hash((self.order, self.y1, self.y2))

    def __repr__(self) -> str:
        y1 = ",".join(map(str, self.y1))
        y2 = ",".join(map(str, self.y2))
        return f"<Factor kind={self.kind} order={self.order} y1=({y1}) y2=({y2})>"


class GroupSpec:
    """The acting group, a product of circles and finite cyclic groups."""

    __slots__ = ("orders",)

    def __init__(self, orders: Sequence[Optional[int]]) -> None:
        self.orders: Tuple[Optional[int], ...] = tuple(orders)

    @property
    def is_finite(self) -> bool:
        return all(p is not None for p in self.orders)

    @property
    def cyclotomic_order(self) -> int:
        """Least common multiple of the finite factor orders."""
        return lcm(1, *(p for p in self.orders if p is not None))

    @property
    def size(self) -> int:
        if not self.is_finite:
            raise ActionError("a group with circle factors is infinite")
        out = 1
        for p in self.orders:
            out *= p  # type: ignore
        return out

    def identity(self) -> Tuple[int, ...]:
        return (0,) * len(self.orders)

    def elements(self) -> Iterator[Tuple[int, ...]]:
        if not self.is_finite:
            raise ActionError("cannot enumerate a group with circle factors")
        yield from cartesian(*(range(p) for p in self.orders))  # type: ignore

    def reduce(self, element: Sequence[int]) -> Tuple[int, ...]:
        return tuple(j % p for j, p in zip(element, self.orders))  # type: ignore

    def multiply(self, a: Sequence[int], b: Sequence[int]) -> Tuple[int, ...]:
        return self.reduce([x + y for x, y in zip(a, b)])

    def inverse(self, a: Sequence[int]) -> Tuple[int, ...]:
        return self.reduce([-x for x in a])

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GroupSpec) and other.orders == self.orders

    def __hash__(self) -> int:
        return hash(self.orders)

    def __repr__(self) -> str:
        parts = ["T" if p is None else f"Z{p}" for p in self.orders]
        return f"<GroupSpec {' x '.join(parts) or 'trivial'}>"


class ActionSpec:
    """A torus or cyclic action on the coordinate algebra.

    A group element with angles ``phi_j`` acts on ``t^lambda_{mu nu}`` by
    ``exp(i sum_j phi_j (mu.y1_j + nu.y2_j))``, optionally composed with a
    constant central element ``z**center`` placed as ``(sigma_1 z, z^-1 sigma_2)``.

    Attributes
    ----------
    root_datum: :class:`RootDatum`
        The group the action lives on.
    factors: Tuple[:class:`Factor`, ...]
        One entry per circle factor.
    name: :class:`str`
        Preset name, used in reports.
    center: :class:`int`
        Residue of the constant central offset.
    """

    __slots__ = ("root_datum", "factors", "name", "center")

    def __init__(self, rd: Union[str, RootDatum], factors: Sequence[Factor], name: str = "custom", center: int = 0) -> None:
        self.root_datum = rd if isinstance(rd, RootDatum) else root_datum(rd)
        self.factors = tuple(factors)
        self.name = name
        _, n = central_generator(self.root_datum)
        self.center = center % n
        for f in self.factors:
            if len(f.y1) != self.root_datum.rank:
                raise ActionError(f"{name}: expected Cartan vectors of length {self.root_datum.rank}")

    @property
    def group(self) -> GroupSpec:
        return GroupSpec([f.order for f in self.factors])

    @property
    def cyclotomic_order(self) -> int:
        return self.group.cyclotomic_order

    def restrict(self, order: int) -> ActionSpec:
        """The same action restricted to the ``order``-th roots of unity in every circle."""
        return ActionSpec(
            self.root_datum, [f.restrict(order) for f in self.factors], f"{self.name}:p={order}", self.center
        )

    def to_json(self) -> ActionPayload:
        return {
            "name": self.name,
            "group": self.root_datum.group,
            "center": self.center,
            "factors": [f.to_json() for f in self.factors],
        }

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, ActionSpec)
            and other.root_datum == self.root_datum
            and other.factors == self.factors
            and other.center == self.center
        )

    def __hash__(self) -> int:
        return hash((self.root_datum, self.factors, self.center))

    def __repr__(self) -> str:
        return f"<ActionSpec name={self.name!r} group={self.root_datum.group} factors={len(self.factors)}>"


def _coeff_weights(rd: RootDatum, coeff: MatrixCoeff) -> Tuple[Weight, Weight]:
    rep = canonical_irrep(rd, coeff.weight)
    return rep.weights[coeff.row], rep.weights[coeff.col]


def _charge(factors: Iterable[Factor], mu: Weight, nu: Weight) -> Charge:
    return tuple(_dot(mu, f.y1) + _dot(nu, f.y2) for f in factors)


def charge_of(action: ActionSpec, coeff: MatrixCoeff) -> Charge:
    """Per-factor charge ``mu.y1 + nu.y2`` of a basis coefficient."""
    mu, nu = _coeff_weights(action.root_datum, coeff)
    return _charge(action.factors, mu, nu)


def central_phase(action: ActionSpec, coeff: MatrixCoeff) -> Fraction:
    """Turns contributed by the constant central offset, reduced modulo 1."""
    if not action.center:
        return Fraction(0)
    c0, _ = central_generator(action.root_datum)
    mu, nu = _coeff_weights(action.root_datum, coeff)
    return (action.center * (_dot(mu, c0) - _dot(nu, c0))) % 1


def element_charges(action: ActionSpec, x: CoordElement) -> Set[Charge]:
    """Distinct charges occurring in ``x``; a single entry means ``x`` is homogeneous."""
    return {charge_of(action, t) for t in x.support()}


def _turns(action: ActionSpec, g: GroupElement) -> Tuple[Fraction, ...]:
    if len(g) != len(action.factors):
        raise ActionError(f"group element has {len(g)} entries, the action has {len(action.factors)} factors")
    out = []
    for f, value in zip(action.factors, g):
        value = _as_fraction(value)
        if f.order is not None:
            if value.denominator != 1:
                raise ActionError(f"cyclic factor of order {f.order} needs an integer residue, not {value}")
            value = value / f.order
        out.append(value)
    return tuple(out)


def _phase(turns: Fraction) -> QScalar:
    turns = turns % 1
    if not turns:
        return QScalar(1)
    return QScalar.zeta(turns.numerator, turns.denominator)


def act(action: ActionSpec, g: GroupElement, x: CoordElement) -> CoordElement:
    """Apply a group element to ``x``.

    Circle entries are exact rational turns (``Fraction(1, 4)`` is a quarter
    turn); cyclic entries are residues ``j`` standing for ``exp(2 pi i j / p)``.

    Raises
    ------
    IrrationalAngle
        A circle angle was given as a float.
    """
    turns = _turns(action, g)
    terms = {}
    for t, c in x.terms():
        total = sum((a * b for a, b in zip(turns, charge_of(action, t))), Fraction(0))
        terms[t] = c * _phase(total + central_phase(action, t))
    return x.algebra.element(terms)


def _fundamental_coefficients(rd: RootDatum) -> Iterator[Tuple[Weight, Weight, Weight]]:
    for fundamental in rd.fundamental_weights():
        weights = canonical_irrep(rd, fundamental).weights
        for mu in weights:
            for nu in weights:
                yield fundamental, mu, nu


def _central_residue(rd: RootDatum, factor: Factor) -> int:
    c0, n = central_generator(rd)
    top = rd.fundamental_weights()[0]
    turns = _dot(top, factor.y1) % 1
    return int(turns / _dot(top, c0)) % n


def validate_action(action: ActionSpec) -> Tuple[bool, CertificatePayload]:
    """Check ``2 pi``-periodicity of every factor modulo the center.

    A factor is well defined when the charge of every fundamental matrix
    coefficient is an integer; these coefficients generate the algebra and
    charges add under products. A cyclic factor of order ``p`` sits inside its
    circle, so the same condition makes ``sigma**p`` act trivially.
    """
    residues = []
    for index, factor in enumerate(action.factors):
        for fundamental, mu, nu in _fundamental_coefficients(action.root_datum):
            charge = _dot(mu, factor.y1) + _dot(nu, factor.y2)
            if charge.denominator != 1:
                return False, {
                    "valid": False,
                    "factor": index,
                    "fundamental": list(fundamental),
                    "mu": list(mu),
                    "nu": list(nu),
                    "charge": str(charge),
                }
        residues.append(_central_residue(action.root_datum, factor))
    return True, {"valid": True, "central_residue": residues}


def family_action(x: int, k11: int = 0, k12: int = 0, k21: int = 0, k22: int = 0, order: Optional[int] = None) -> ActionSpec:
    """Member of the closed-form family of well defined single-circle SU(3) actions."""
    if x not in (0, 1, 2):
        raise ActionError(f"x must be 0, 1 or 2, not {x}")
    y1 = (k11 + Fraction(x, 3), k12 + Fraction(2 * x, 3))
    y2 = (k21 + Fraction(2 * x, 3), k22 + Fraction(x, 3))
    return ActionSpec(A2, [Factor(y1, y2, order)], f"su3-prop5:{x},{k11},{k12},{k21},{k22}")


def in_action_family(y1: Sequence[Fraction], y2: Sequence[Fraction], kbox: Optional[int] = None) -> bool:
    """Whether ``(y1, y2)`` has the closed form, with integer parts in ``[-kbox, kbox]`` when given."""
    y1 = [Fraction(c) for c in y1]
    y2 = [Fraction(c) for c in y2]
    x = (3 * y1[0]) % 3
    if x.denominator != 1:
        return False
    offsets = (Fraction(x, 3), Fraction(2 * x, 3), Fraction(2 * x, 3), Fraction(x, 3))
    ks = [c - o for c, o in zip(y1 + y2, offsets)]
    if any(k.denominator != 1 for k in ks):
        return False
    return kbox is None or all(-kbox <= k <= kbox for k in ks)


def enumerate_su3_actions(xs: Iterable[int] = (0, 1, 2), kbox: int = 2) -> List[ActionSpec]:
    """Every closed-form family member with ``x`` in ``xs`` and integer parts in ``[-kbox, kbox]``.

    Each emitted action is checked with :func:`validate_action`.
    """
    out = []
    box = range(-kbox, kbox + 1)
    for x in xs:
        for ks in cartesian(box, repeat=4):
            action = family_action(x, *ks)
            valid, certificate = validate_action(action)
            if not valid:
                raise ActionError(f"family member {action.name} failed validation: {certificate}")
            out.append(action)
    _log.debug("enumerated %d SU(3) actions", len(out))
    return out


def scan_su3_actions(kbox: int = 2, denominator: int = 6) -> Tuple[Set[Tuple[Charge, Charge]], List[Tuple[Charge, Charge]]]:
    """Brute-force periodicity scan over a rational grid of single-circle SU(3) actions.

    Every coordinate runs over ``n / denominator`` covering ``[-kbox, kbox + 2)``.
    Valid points are split into those inside the ``kbox`` window of the closed
    form, and those that are valid but not of the closed form at all.

    Returns
    -------
    Tuple[Set, List]
        ``(in_window, outside_family)`` as ``((y1), (y2))`` pairs of fractions.
    """
    d = denominator
    values = np.arange(-kbox * d, (kbox + 2) * d, dtype=np.int64)
    pairs = [(mu, nu) for _, mu, nu in _fundamental_coefficients(A2)]
    mus = np.array([p[0] for p in pairs], dtype=np.int64)
    nus = np.array([p[1] for p in pairs], dtype=np.int64)

    rest = np.stack(np.meshgrid(values, values, values, indexing="ij"), axis=-1).reshape(-1, 3)
    in_window: Set[Tuple[Charge, Charge]] = set()
    outside: List[Tuple[Charge, Charge]] = []
    for first in values:
        grid = np.concatenate([np.full((len(rest), 1), first, dtype=np.int64), rest], axis=1)
        # scaled charges of the nine fundamental coefficients
        charges = grid[:, :2] @ mus.T + grid[:, 2:] @ nus.T
        valid = np.all(charges % d == 0, axis=1)
        for row in grid[valid]:
            y1 = (Fraction(int(row[0]), d), Fraction(int(row[1]), d))
            y2 = (Fraction(int(row[2]), d), Fraction(int(row[3]), d))
            if not in_action_family(y1, y2):
                outside.append((y1, y2))
            elif in_action_family(y1, y2, kbox):
                in_window.add((y1, y2))
    _log.debug("scan found %d valid points in the window, %d outside the family", len(in_window), len(outside))
    return in_window, outside


def shift_by_center(action: ActionSpec, j: int) -> ActionSpec:
    """The equivalent action ``(sigma_1 z**j, z**-j sigma_2)`` for the central generator ``z``."""
    return ActionSpec(action.root_datum, action.factors, action.name, action.center + j)


def invariant_basis(action: ActionSpec, algebra: Union[CoordAlgebra, int]) -> List[MatrixCoeff]:
    """Basis coefficients fixed by the action, up to the algebra's cutoff.

    Circle factors need charge zero, a cyclic factor of order ``p`` a charge
    divisible by ``p``.
    """
    if isinstance(algebra, int):
        algebra = CoordAlgebra(action.root_datum, algebra)
    out = []
    for t in algebra.basis():
        charges = charge_of(action, t)
        if all(_is_fixed(f, c) for f, c in zip(action.factors, charges)) and not central_phase(action, t):
            out.append(t)
    return out


def _is_fixed(factor: Factor, charge: Fraction) -> bool:
    if factor.order is None:
        return charge == 0
    return (charge % factor.order) == 0


def charge_table(action: ActionSpec, elements: Dict[str, CoordElement]) -> Dict[str, Charge]:
    """Charges of named homogeneous elements, such as the generators."""
    out = {}
    for name, x in elements.items():
        charges = element_charges(action, x)
        if len(charges) != 1:
            raise ActionError(f"{name} is not homogeneous under {action.name}")
        (out[name],) = charges
    return out


def _su2(k: int, l: int, name: str) -> ActionSpec:
    y1 = (Fraction(l - k, 2),)
    y2 = (Fraction(-(l + k), 2),)
    return ActionSpec(A1, [Factor(y1, y2)], name)


def _ints(text: str, preset: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",")]
    except ValueError:
        raise InvalidPreset(preset, f"expected integers, got {text!r}") from None


def _sphere(args: List[int], preset: str) -> ActionSpec:
    if args:
        raise InvalidPreset(preset, "sphere takes no parameters")
    return _su2(1, 1, "sphere")


def _wpp(args: List[int], preset: str) -> ActionSpec:
    if len(args) != 2 or min(args) < 1:
        raise InvalidPreset(preset, "expected two positive integers k,l")
    k, l = args
    return _su2(k, l, f"wpp:{k},{l}")


def _teardrop(args: List[int], preset: str) -> ActionSpec:
    if len(args) == 2 and args[0] == 1:
        args = args[1:]
    if len(args) != 1 or args[0] < 1:
        raise InvalidPreset(preset, "expected l or 1,l with l positive")
    return _su2(1, args[0], f"teardrop:1,{args[0]}")


def _lens(args: List[int], preset: str) -> ActionSpec:
    if len(args) != 2 or args[0] < 1:
        raise InvalidPreset(preset, "expected l,p with l positive")
    l, p = args
    if not isprime(p):
        raise InvalidPreset(preset, f"{p} is not prime")
    (factor,) = _su2(1, l, "lens").factors
    return ActionSpec(A1, [factor.restrict(p)], f"lens:{l},{p}")


def _su3_adjoint(args: List[int], preset: str) -> ActionSpec:
    if args:
        raise InvalidPreset(preset, "su3-adjoint takes no parameters")
    phi = Factor((1, 0), (-1, 0))
    theta = Factor((0, 1), (0, -1))
    return ActionSpec(A2, [phi, theta], "su3-adjoint")


def _su3_family(args: List[int], preset: str) -> ActionSpec:
    if len(args) not in (1, 5):
        raise InvalidPreset(preset, "expected x or x,k11,k12,k21,k22")
    if args[0] not in (0, 1, 2):
        raise InvalidPreset(preset, "x must be 0, 1 or 2")
    return family_action(*args)


PRESETS = {
    "sphere": _sphere,
    "wpp": _wpp,
    "teardrop": _teardrop,
    "lens": _lens,
    "su3-adjoint": _su3_adjoint,
    "su3-prop5": _su3_family,
}

_SUFFIX = re.compile(r":p=(\d+)$")


def parse_preset(preset: str) -> ActionSpec:
    """Build an :class:`ActionSpec` from a preset string.

    Accepted forms are ``sphere``, ``wpp:k,l``, ``teardrop:l``, ``teardrop:1,l``,
    ``lens:l,p``, ``su3-adjoint``, ``su3-prop5:x[,k11,k12,k21,k22]``,
    ``trivial:su2`` and ``trivial:su3``. A trailing ``:p=N`` restricts every
    circle to its ``N``-th roots of unity.

    Raises
    ------
    InvalidPreset
        The string names no preset or has malformed parameters.
    """
    text = preset.strip()
    order = None
    match = _SUFFIX.search(text)
    if match:
        order = int(match.group(1))
        if order < 1:
            raise InvalidPreset(preset, "restriction order must be positive")
        text = text[: match.start()]

    head, _, rest = text.partition(":")
    if head == "trivial":
        try:
            rd = root_datum(rest or "su2")
        except UnknownRepresentation:
            raise InvalidPreset(preset, f"unknown group {rest!r}") from None
        zero = (0,) * rd.rank
        action = ActionSpec(rd, [Factor(zero, zero)], f"trivial:{rd.group}")
    else:
        builder = PRESETS.get(head)
        if builder is None:
            raise InvalidPreset(preset, "unknown preset")
        action = builder(_ints(rest, preset) if rest else [], preset)

    if order is not None:
        action = action.restrict(order)
    valid, certificate = validate_action(action)
    if not valid:
        raise InvalidPreset(preset, f"action is not periodic: {certificate}")
    return action

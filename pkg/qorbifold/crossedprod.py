from __future__ import annotations

from typing import Dict, Iterator, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

import logging

from .coordalg import CoordAlgebra, CoordElement, MatrixCoeff
from .errors import ActionError, GroupMismatch
from .linalg import Matrix, rank_of_vectors
from .orbifold import ActionSpec, _charge, _fundamental_coefficients, act
from .report import Report
from .scalars import QScalar, Scalarish

__all__ = (
    "CrossedProduct",
    "CrossedElement",
    "VarpiMatrix",
    "cross_multiply",
    "cross_star",
    "represent_varpi",
    "is_effective",
    "check_effective_faithful",
    "verify_crossed_product",
    "multiplication_table",
)

_log = logging.getLogger(__name__)

Residues = Tuple[int, ...]


class CrossedProduct:
    """The crossed product of the coordinate algebra by a finite abelian group.

    Parameters
    ----------
    action: :class:`ActionSpec`
        An action whose factors are all cyclic.
    algebra: Optional[:class:`CoordAlgebra`]
        The coordinate algebra; a fresh one with ``cutoff`` is built if omitted.
    cutoff: :class:`int`
        Weight cutoff used when ``algebra`` is omitted.

    Raises
    ------
    ActionError
        The action has a circle factor.
    """

    __slots__ = ("action", "algebra", "group")

    def __init__(self, action: ActionSpec, algebra: Optional[CoordAlgebra] = None, cutoff: int = 2) -> None:
        group = action.group
        if not group.is_finite:
            raise ActionError(f"{action.name}: crossed products need a finite group; restrict with :p=N")
        self.action = action
        self.group = group
        self.algebra = algebra or CoordAlgebra(action.root_datum, cutoff)
        if self.algebra.root_datum != action.root_datum:
            raise GroupMismatch(f"{action.name} acts on {action.root_datum.group}, not {self.algebra.group}")

    def element(self, terms: Mapping[Sequence[int], CoordElement]) -> CrossedElement:
        return CrossedElement(self, {tuple(g): x for g, x in terms.items()})

    def zero(self) -> CrossedElement:
        return CrossedElement(self, {})

    def unit(self) -> CrossedElement:
        return self.group_element(self.group.identity())

    def group_element(self, g: Sequence[int]) -> CrossedElement:
        """The embedding ``sigma -> sigma . 1`` of the group algebra."""
        return CrossedElement(self, {tuple(g): self.algebra.unit()})

    def coordinate_element(self, x: CoordElement) -> CrossedElement:
        """The embedding ``t -> identity . t`` of the coordinate algebra."""
        return CrossedElement(self, {self.group.identity(): x})

    def basis(self, cutoff: Optional[int] = None) -> List[Tuple[Residues, MatrixCoeff]]:
        return [(g, t) for g in self.group.elements() for t in self.algebra.basis(cutoff)]

    def basis_element(self, g: Residues, t: MatrixCoeff) -> CrossedElement:
        return CrossedElement(self, {g: self.algebra.element({t: 1})})

    def __repr__(self) -> str:
        return f"<CrossedProduct action={self.action.name!r} group={self.group!r}>"


class CrossedElement:
    """A finite sum ``sum_sigma sigma . t_sigma``.

    Residue tuples are reduced modulo the factor orders and zero coordinate
    parts are dropped.
    """

    __slots__ = ("context", "_parts")

    __hash__ = None  # type: ignore

    def __init__(self, context: CrossedProduct, parts: Mapping[Residues, CoordElement]) -> None:
        self.context = context
        self._parts: Dict[Residues, CoordElement] = {}
        for g, x in parts.items():
            g = context.group.reduce(g)
            if g in self._parts:
                x = self._parts[g] + x
            if x:
                self._parts[g] = x
            else:
                self._parts.pop(g, None)

    def parts(self) -> Iterator[Tuple[Residues, CoordElement]]:
        for g in sorted(self._parts):
            yield g, self._parts[g]

    def part(self, g: Sequence[int]) -> CoordElement:
        return self._parts.get(tuple(g), self.context.algebra.zero())

    def is_zero(self) -> bool:
        return not self._parts

    def __bool__(self) -> bool:
        return bool(self._parts)

    def _check(self, other: CrossedElement) -> None:
        if other.context.action != self.context.action:
            raise GroupMismatch("crossed elements over different actions")

    def __add__(self, other: CrossedElement) -> CrossedElement:
        if not isinstance(other, CrossedElement):
            return NotImplemented
        self._check(other)
        parts = dict(self._parts)
        for g, x in other._parts.items():
            parts[g] = parts[g] + x if g in parts else x
        return CrossedElement(self.context, parts)

    def __neg__(self) -> CrossedElement:
        return CrossedElement(self.context, {g: -x for g, x in self._parts.items()})

    def __sub__(self, other: CrossedElement) -> CrossedElement:
        return self + (-other)

    def scale(self, factor: Scalarish) -> CrossedElement:
        return CrossedElement(self.context, {g: x.scale(factor) for g, x in self._parts.items()})

    def __mul__(self, other: Union[CrossedElement, Scalarish]) -> CrossedElement:
        if isinstance(other, CrossedElement):
            return cross_multiply(self, other)
        if isinstance(other, (QScalar, int)):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CrossedElement):
            return NotImplemented
        return (self - other).is_zero()

    def star(self) -> CrossedElement:
        return cross_star(self)

    def to_json(self) -> List[dict]:
        return [{"group": list(g), "element": x.to_json()} for g, x in self.parts()]

    def __str__(self) -> str:
        if not self._parts:
            return "0"
        return " + ".join(f"{list(g)}.({x})" for g, x in self.parts())

    def __repr__(self) -> str:
        return f"<CrossedElement parts={len(self._parts)}>"


def cross_multiply(a: CrossedElement, b: CrossedElement, limit: Optional[int] = None) -> CrossedElement:
    """``(sigma . s)(tau . t) = sigma tau . s (sigma |> t)``.

    Raises
    ------
    GroupMismatch
        The operands live over different actions.
    """
    a._check(b)
    ctx = a.context
    algebra = ctx.algebra
    parts: Dict[Residues, CoordElement] = {}
    for g, x in a._parts.items():
        for h, y in b._parts.items():
            gh = ctx.group.multiply(g, h)
            product = algebra.multiply(x, act(ctx.action, g, y), limit)
            parts[gh] = parts[gh] + product if gh in parts else product
    return CrossedElement(ctx, parts)


def cross_star(a: CrossedElement) -> CrossedElement:
    """``(sigma . t)* = sigma^-1 . (sigma^-1 |> t*)``."""
    ctx = a.context
    parts: Dict[Residues, CoordElement] = {}
    for g, x in a._parts.items():
        inv = ctx.group.inverse(g)
        image = act(ctx.action, inv, x.star())
        parts[inv] = parts[inv] + image if inv in parts else image
    return CrossedElement(ctx, parts)


class VarpiMatrix(NamedTuple):
    """Truncated matrix of ``varpi`` with per-column overflow flags."""

    matrix: Matrix
    basis: Tuple[MatrixCoeff, ...]
    overflow: Tuple[bool, ...]

    def retained(self) -> List[int]:
        return [j for j, flagged in enumerate(self.overflow) if not flagged]


def _group_diagonal(ctx: CrossedProduct, g: Residues, basis: Sequence[MatrixCoeff]) -> List[QScalar]:
    out = []
    for t in basis:
        phase = act(ctx.action, g, ctx.algebra.element({t: 1})).coefficient_of(t)
        out.append(phase)
    return out


def represent_varpi(a: CrossedElement, cutoff: Optional[int] = None) -> VarpiMatrix:
    """Matrix of ``varpi(sigma . t) psi = pi(t)(sigma |> psi)`` on coefficients up to ``cutoff``.

    The group acts diagonally on the basis, so each part contributes
    ``pi(t_sigma)`` times a diagonal of phases. A column is flagged when any
    part's product leaves the retained span.
    """
    ctx = a.context
    algebra = ctx.algebra
    cutoff = algebra.cutoff if cutoff is None else cutoff
    basis = tuple(algebra.basis(cutoff))
    n = len(basis)
    total = Matrix.zeros(n)
    overflow = [False] * n
    for g, x in a._parts.items():
        gns = algebra.gns_matrix(x, cutoff)
        total = total + gns.matrix @ Matrix.diagonal(_group_diagonal(ctx, g, basis))
        overflow = [o or f for o, f in zip(overflow, gns.overflow)]
    return VarpiMatrix(total, basis, tuple(overflow))


def _columns_agree(lhs: VarpiMatrix, a: VarpiMatrix, b: VarpiMatrix) -> Tuple[bool, Optional[int]]:
    """Compare ``lhs`` with ``a @ b`` on columns where neither side overflowed."""
    product = a.matrix @ b.matrix
    for j in range(len(lhs.basis)):
        if lhs.overflow[j] or b.overflow[j]:
            continue
        if any(a.overflow[i] for i in b.matrix.column(j)):
            continue
        if lhs.matrix.column(j) != product.column(j):
            return False, j
    return True, None


def is_effective(action: ActionSpec) -> Tuple[bool, Optional[Residues]]:
    """Whether every non-identity group element moves some fundamental coefficient.

    Returns the first element acting trivially when the action is not effective.
    """
    group = action.group
    pairs = list(_fundamental_coefficients(action.root_datum))
    for g in group.elements():
        if g == group.identity():
            continue
        moved = False
        for _, mu, nu in pairs:
            turns = sum(j * c / p for j, c, p in zip(g, _charge(action.factors, mu, nu), group.orders))  # type: ignore
            if turns % 1:
                moved = True
                break
        if not moved:
            return False, g
    return True, None


def check_effective_faithful(action: ActionSpec, cutoff: int = 1) -> Report:
    """Effectiveness of the group action and faithfulness of ``varpi`` up to ``cutoff``.

    Labels ``sigma . t`` run over coefficients with highest weight coordinates
    at most ``cutoff``; their matrices ``varpi(sigma . t)`` are taken on the
    span up to ``2 * cutoff``, where products of two labels are exact, and
    must be linearly independent.
    """
    report = Report("effective-faithful", {"action": action.name, "cutoff": cutoff})
    effective, fixed = is_effective(action)
    report.check("effective", effective, None if effective else {"trivially_acting": list(fixed)})

    span = 2 * cutoff
    ctx = CrossedProduct(action, CoordAlgebra(action.root_datum, span))
    vectors = []
    labels = ctx.basis(cutoff)
    for g, t in labels:
        m = represent_varpi(ctx.basis_element(g, t), span).matrix
        n = m.cols
        vectors.append({i * n + j: v for i, j, v in m.entries()})
    found = rank_of_vectors(vectors)
    report.check(
        "varpi-linearly-independent",
        found == len(labels),
        {"rank": found, "expected": len(labels)},
        rank=found,
        matrices=len(labels),
        span=span,
    )
    report.note(f"faithful up to cutoff {cutoff}" if found == len(labels) else f"not faithful at cutoff {cutoff}")
    return report.finish()


def verify_crossed_product(action: ActionSpec, cutoff: int = 2, samples: Optional[List[CrossedElement]] = None) -> Report:
    """Associativity, involution, covariance and the ``varpi`` homomorphism on samples."""
    ctx = CrossedProduct(action, CoordAlgebra(action.root_datum, 2 * cutoff + 2))
    algebra = ctx.algebra
    gens = algebra.generators()
    gens.update({f"{name}*": x.star() for name, x in list(gens.items())})
    report = Report("crossed", {"action": action.name, "cutoff": cutoff})

    if samples is None:
        samples = []
        for g in ctx.group.elements():
            samples.append(ctx.group_element(g))
            for x in gens.values():
                samples.append(ctx.element({g: x}))
        # a non-homogeneous mix
        first = next(iter(gens.values()))
        samples.append(ctx.unit() + ctx.coordinate_element(first).scale(2))

    unit = ctx.unit()
    for i, a in enumerate(samples):
        report.check(f"unit/{i}", unit * a == a and a * unit == a)
        report.check(f"star-involutive/{i}", a.star().star() == a)

    triples = [(samples[i], samples[j], samples[(i + j + 1) % len(samples)]) for i in range(len(samples)) for j in range(0, len(samples), 3)]
    bad = next((k for k, (a, b, c) in enumerate(triples) if (a * b) * c != a * (b * c)), None)
    report.check("associativity", bad is None, {"triple": bad}, triples=len(triples))

    bad = None
    for i, a in enumerate(samples):
        for j, b in enumerate(samples[::2]):
            if (a * b).star() != b.star() * a.star():
                bad = (i, 2 * j)
                break
        if bad:
            break
    report.check("star-anti-multiplicative", bad is None, {"pair": bad})

    for g in ctx.group.elements():
        sigma = ctx.group_element(g)
        sigma_inv = ctx.group_element(ctx.group.inverse(g))
        for name, x in gens.items():
            lhs = sigma * ctx.coordinate_element(x) * sigma_inv
            rhs = ctx.coordinate_element(act(action, g, x))
            report.check(f"covariance/{list(g)}/{name}", lhs == rhs)

    for name, x in gens.items():
        identity_slice = represent_varpi(ctx.coordinate_element(x), cutoff).matrix
        report.check(f"identity-slice/{name}", identity_slice == algebra.gns_matrix(x, cutoff).matrix)

    for g in ctx.group.elements():
        sigma = ctx.group_element(g)
        for name, x in gens.items():
            b = ctx.coordinate_element(x)
            ok, column = _columns_agree(
                represent_varpi(sigma * b, cutoff), represent_varpi(sigma, cutoff), represent_varpi(b, cutoff)
            )
            report.check(f"varpi-homomorphism/{list(g)}/{name}", ok, {"column": column})
            ok, column = _columns_agree(
                represent_varpi(b * sigma, cutoff), represent_varpi(b, cutoff), represent_varpi(sigma, cutoff)
            )
            report.check(f"varpi-homomorphism/{name}/{list(g)}", ok, {"column": column})
    return report.finish()


def multiplication_table(action: ActionSpec, cutoff: int = 1) -> List[dict]:
    """All products of crossed basis elements ``sigma . t`` with ``t`` up to ``cutoff``."""
    ctx = CrossedProduct(action, CoordAlgebra(action.root_datum, 2 * cutoff))
    labels = ctx.basis(cutoff)
    rows = []
    for g, s in labels:
        left = ctx.basis_element(g, s)
        for h, t in labels:
            product = left * ctx.basis_element(h, t)
            rows.append(
                {
                    "left": {"group": list(g), "coefficient": str(s)},
                    "right": {"group": list(h), "coefficient": str(t)},
                    "product": product.to_json(),
                }
            )
    _log.debug("multiplication table for %s has %d entries", action.name, len(rows))
    return rows

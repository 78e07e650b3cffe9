from __future__ import annotations

from typing import Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union, TYPE_CHECKING
from fractions import Fraction
from itertools import product as cartesian

import logging

from .coordalg import CoordAlgebra, CoordElement, MatrixCoeff, TensorElement
from .errors import DegreeMismatch, GroupMismatch, NotAnIsometry, ProjectorError
from .orbifold import ActionSpec, Charge, Factor, charge_of
from .report import Report
from .scalars import QScalar, Scalarish

if TYPE_CHECKING:
    from .types.coord import ChainPayload, TensorTerm

__all__ = (
    "Monomial",
    "EquivariantProjector",
    "InvariantChain",
    "Cochain",
    "corep_column_projector",
    "trivial_projector",
    "conjugate_projector",
    "conjugation_intertwiners",
    "chern_character",
    "hochschild_b",
    "cyclic_lambda",
    "pair_chain",
    "check_equivalence",
)

_log = logging.getLogger(__name__)

Monomial = Tuple[MatrixCoeff, ...]
ElementMatrix = Tuple[Tuple[CoordElement, ...], ...]


def _congruent(factor: Factor, a: Fraction, b: Fraction) -> bool:
    if factor.order is None:
        return a == b
    return ((a - b) % factor.order) == 0


def _matches(action: ActionSpec, charge: Charge, expected: Charge) -> bool:
    return all(_congruent(f, a, b) for f, a, b in zip(action.factors, charge, expected))


def _difference(a: Charge, b: Charge) -> Charge:
    return tuple(x - y for x, y in zip(a, b))


def _matmul(algebra: CoordAlgebra, a: ElementMatrix, b: ElementMatrix) -> ElementMatrix:
    rows, inner, cols = len(a), len(b), len(b[0]) if b else 0
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            entry = algebra.zero()
            for k in range(inner):
                if a[i][k] and b[k][j]:
                    entry = entry + algebra.multiply(a[i][k], b[k][j])
            row.append(entry)
        out.append(tuple(row))
    return tuple(out)


def _entry_mismatch(action: ActionSpec, x: CoordElement, expected: Charge) -> Optional[Tuple[MatrixCoeff, Charge]]:
    for t in x.support():
        charge = charge_of(action, t)
        if not _matches(action, charge, expected):
            return t, charge
    return None


class EquivariantProjector:
    """An invariant idempotent in ``end(V) (x) C[G_q]``.

    The representation of the acting group on ``V`` is diagonal, so it is
    recorded as one charge per basis vector of ``V``. Invariance under
    ``rho(sigma) p rho(sigma)^-1`` is the statement that every coefficient
    of ``p[i][j]`` carries charge ``charges[i] - charges[j]``.

    Attributes
    ----------
    action: :class:`ActionSpec`
        The action the projector is equivariant for.
    algebra: :class:`CoordAlgebra`
        Algebra holding the entries.
    charges: Tuple[Tuple[:class:`fractions.Fraction`, ...], ...]
        Per-factor charge of each basis vector of ``V``.
    entries: Tuple[Tuple[:class:`CoordElement`, ...], ...]
        The matrix ``p``.
    """

    __slots__ = ("action", "algebra", "charges", "entries")

    def __init__(
        self,
        action: ActionSpec,
        algebra: CoordAlgebra,
        charges: Sequence[Sequence[Union[int, Fraction]]],
        entries: Sequence[Sequence[CoordElement]],
    ) -> None:
        if algebra.root_datum != action.root_datum:
            raise GroupMismatch(f"{action.name} acts on {action.root_datum.group}, not {algebra.group}")
        n = len(charges)
        if len(entries) != n or any(len(row) != n for row in entries):
            raise ProjectorError(f"expected a {n}x{n} matrix of algebra elements")
        self.action = action
        self.algebra = algebra
        self.charges: Tuple[Charge, ...] = tuple(tuple(Fraction(c) for c in ch) for ch in charges)
        for ch in self.charges:
            if len(ch) != len(action.factors):
                raise ProjectorError(f"every V-charge needs {len(action.factors)} entries")
        self.entries: ElementMatrix = tuple(tuple(row) for row in entries)

    @property
    def dimension(self) -> int:
        return len(self.charges)

    def entry(self, i: int, j: int) -> CoordElement:
        return self.entries[i][j]

    def square(self) -> ElementMatrix:
        return _matmul(self.algebra, self.entries, self.entries)

    def adjoint(self) -> ElementMatrix:
        n = self.dimension
        return tuple(tuple(self.entries[j][i].star() for j in range(n)) for i in range(n))

    def trace(self) -> CoordElement:
        total = self.algebra.zero()
        for i in range(self.dimension):
            total = total + self.entries[i][i]
        return total

    def expected_charge(self, i: int, j: int) -> Charge:
        return _difference(self.charges[i], self.charges[j])

    def verify(self) -> Report:
        """Idempotence, self-adjointness and invariance, entry by entry."""
        report = Report("projector", {"action": self.action.name, "dimension": self.dimension})
        n = self.dimension
        squared = self.square()
        adjoint = self.adjoint()
        pairs = list(cartesian(range(n), repeat=2))

        bad = next(((i, j) for i, j in pairs if squared[i][j] != self.entries[i][j]), None)
        report.check("idempotent", bad is None, {"entry": bad})
        bad = next(((i, j) for i, j in pairs if adjoint[i][j] != self.entries[i][j]), None)
        report.check("self-adjoint", bad is None, {"entry": bad})

        witness = None
        for i, j in pairs:
            found = _entry_mismatch(self.action, self.entries[i][j], self.expected_charge(i, j))
            if found is not None:
                witness = {"entry": (i, j), "coefficient": str(found[0]), "charge": found[1],
                           "expected": self.expected_charge(i, j)}
                break
        report.check("invariant", witness is None, witness)
        return report.finish()

    def __repr__(self) -> str:
        return f"<EquivariantProjector action={self.action.name!r} dimension={self.dimension}>"


def _algebra_for(action: ActionSpec, algebra: Optional[CoordAlgebra], cutoff: int) -> CoordAlgebra:
    if algebra is None:
        return CoordAlgebra(action.root_datum, cutoff)
    if algebra.root_datum != action.root_datum:
        raise GroupMismatch(f"{action.name} acts on {action.root_datum.group}, not {algebra.group}")
    return algebra


def corep_column_projector(
    action: ActionSpec,
    column: int = 0,
    weight: Optional[Sequence[int]] = None,
    charges: Optional[Sequence[Sequence[Union[int, Fraction]]]] = None,
    algebra: Optional[CoordAlgebra] = None,
) -> EquivariantProjector:
    """The projector ``p = v v*`` on a column ``v`` of a corepresentation matrix.

    Parameters
    ----------
    action: :class:`ActionSpec`
        Action on the coordinate algebra.
    column: :class:`int`
        Column label ``c``, so that ``v_i = t^weight_{i, c}``.
    weight: Optional[Sequence[:class:`int`]]
        Highest weight of the corepresentation; the first fundamental weight
        by default.
    charges: Optional[Sequence[Sequence[:class:`int`]]]
        Declared V-charges. Only their differences matter; the charges of the
        column entries are used when omitted.
    algebra: Optional[:class:`CoordAlgebra`]
        Algebra to compute in. A fresh one with room for ``p * p`` is built
        when omitted.

    Raises
    ------
    NotAnIsometry
        ``sum_i v_i* v_i`` is not the unit.
    ProjectorError
        The declared charges disagree with the column.
    """
    rd = action.root_datum
    weight = tuple(weight) if weight is not None else rd.fundamental_weights()[0]
    algebra = _algebra_for(action, algebra, 4 * max(weight))
    dim = algebra.dimension(weight)
    if not 0 <= column < dim:
        raise ProjectorError(f"column {column} outside a corepresentation of dimension {dim}")

    v = [algebra.coefficient(weight, i, column) for i in range(dim)]
    norm = algebra.zero()
    for x in v:
        norm = norm + algebra.multiply(x.star(), x)
    if norm != algebra.unit():
        raise NotAnIsometry(f"column {column} of weight {weight}: v* v = {norm}")

    natural = [charge_of(action, x.support()[0]) for x in v]
    if charges is None:
        declared = natural
    else:
        declared = [tuple(Fraction(c) for c in ch) for ch in charges]
        if len(declared) != dim:
            raise ProjectorError(f"expected {dim} V-charges, got {len(declared)}")
        for i in range(dim):
            if not _matches(action, _difference(declared[i], declared[0]), _difference(natural[i], natural[0])):
                raise ProjectorError(f"declared V-charge {declared[i]} of index {i} does not match the column")

    entries = [[algebra.multiply(v[i], v[j].star()) for j in range(dim)] for i in range(dim)]
    _log.debug("built %dx%d column projector for %s", dim, dim, action.name)
    return EquivariantProjector(action, algebra, declared, entries)


def trivial_projector(action: ActionSpec, n: int = 1, algebra: Optional[CoordAlgebra] = None) -> EquivariantProjector:
    """``diag(1, 0, ..., 0)`` in ``n x n`` matrices, with all V-charges zero."""
    if n < 1:
        raise ProjectorError(f"dimension must be positive, not {n}")
    algebra = _algebra_for(action, algebra, 2)
    zero = algebra.zero()
    entries = [[algebra.unit() if i == j == 0 else zero for j in range(n)] for i in range(n)]
    charges = [(0,) * len(action.factors)] * n
    return EquivariantProjector(action, algebra, charges, entries)


def _unit_phases(u: Sequence[Scalarish], n: int) -> List[QScalar]:
    if len(u) != n:
        raise ProjectorError(f"expected {n} diagonal entries, got {len(u)}")
    out = [c if isinstance(c, QScalar) else QScalar(c) for c in u]
    for c in out:
        if c * c.conj() != QScalar(1):
            raise ProjectorError(f"{c} is not a unit-modulus scalar")
    return out


def conjugate_projector(p: EquivariantProjector, u: Sequence[Scalarish]) -> EquivariantProjector:
    """``u p u*`` for a diagonal unitary ``u`` of scalar units."""
    phases = _unit_phases(u, p.dimension)
    n = p.dimension
    entries = [[p.entries[i][j].scale(phases[i] * phases[j].conj()) for j in range(n)] for i in range(n)]
    return EquivariantProjector(p.action, p.algebra, p.charges, entries)


def conjugation_intertwiners(p: EquivariantProjector, u: Sequence[Scalarish]) -> Tuple[ElementMatrix, ElementMatrix]:
    """The pair ``(gamma, gamma') = (u p, p u*)`` relating ``p`` and ``u p u*``."""
    phases = _unit_phases(u, p.dimension)
    n = p.dimension
    gamma = tuple(tuple(p.entries[i][j].scale(phases[i]) for j in range(n)) for i in range(n))
    gamma_prime = tuple(tuple(p.entries[i][j].scale(phases[j].conj()) for j in range(n)) for i in range(n))
    return gamma, gamma_prime


def check_equivalence(
    p: EquivariantProjector,
    p_prime: EquivariantProjector,
    gamma: Sequence[Sequence[CoordElement]],
    gamma_prime: Sequence[Sequence[CoordElement]],
) -> Report:
    """Check that invariant ``gamma: V -> V'`` and ``gamma': V' -> V`` exhibit ``p ~ p'``.

    Verifies ``gamma gamma' = p'``, ``gamma' gamma = p`` and the invariance of
    both intertwiners. This is a checker, not a search.
    """
    if p.action != p_prime.action:
        raise GroupMismatch("projectors are equivariant for different actions")
    report = Report("equivalence", {"action": p.action.name, "dimensions": [p.dimension, p_prime.dimension]})
    gamma = tuple(tuple(row) for row in gamma)
    gamma_prime = tuple(tuple(row) for row in gamma_prime)
    n, m = p.dimension, p_prime.dimension
    if len(gamma) != m or any(len(row) != n for row in gamma):
        raise ProjectorError(f"gamma must be {m}x{n}")
    if len(gamma_prime) != n or any(len(row) != m for row in gamma_prime):
        raise ProjectorError(f"gamma' must be {n}x{m}")

    algebra = p.algebra
    forward = _matmul(algebra, gamma, gamma_prime)
    backward = _matmul(algebra, gamma_prime, gamma)
    bad = next(((i, j) for i in range(m) for j in range(m) if forward[i][j] != p_prime.entries[i][j]), None)
    report.check("gamma-gamma'-is-p'", bad is None, {"entry": bad})
    bad = next(((i, j) for i in range(n) for j in range(n) if backward[i][j] != p.entries[i][j]), None)
    report.check("gamma'-gamma-is-p", bad is None, {"entry": bad})

    for name, matrix, left, right in (
        ("gamma-invariant", gamma, p_prime.charges, p.charges),
        ("gamma'-invariant", gamma_prime, p.charges, p_prime.charges),
    ):
        witness = None
        for i, row in enumerate(matrix):
            for j, x in enumerate(row):
                found = _entry_mismatch(p.action, x, _difference(left[i], right[j]))
                if found is not None and witness is None:
                    witness = {"entry": (i, j), "coefficient": str(found[0]), "charge": found[1]}
        report.check(name, witness is None, witness)
    return report.finish()


class InvariantChain:
    """An element of the invariant chain complex.

    A degree ``k`` chain is a combination of ``(k + 1)``-fold tensor
    monomials of basis coefficients. It belongs to the complex when every
    monomial is fixed by the diagonal action, even though its individual
    factors need not be.

    Attributes
    ----------
    action: :class:`ActionSpec`
        The action defining invariance.
    tensor: :class:`TensorElement`
        The underlying combination of monomials.
    degree: :class:`int`
        Number of tensor factors minus one.
    """

    __slots__ = ("action", "tensor", "degree")

    def __init__(self, action: ActionSpec, tensor: TensorElement, degree: Optional[int] = None) -> None:
        self.action = action
        self.tensor = tensor
        if degree is None:
            degree = tensor.length - 1
        elif not tensor.is_zero() and tensor.length != degree + 1:
            raise DegreeMismatch(f"monomials have {tensor.length} factors, not {degree + 1}")
        self.degree = degree

    @classmethod
    def from_element(cls, action: ActionSpec, x: CoordElement) -> InvariantChain:
        """A degree 0 chain, that is an element of the algebra."""
        return cls(action, TensorElement(x.algebra, {(t,): c for t, c in x.terms()}), 0)

    def terms(self) -> Iterator[Tuple[Monomial, QScalar]]:
        return self.tensor.terms()

    def factor_charges(self, monomial: Monomial) -> List[Charge]:
        return [charge_of(self.action, t) for t in monomial]

    def total_charge(self, monomial: Monomial) -> Charge:
        totals = [Fraction(0)] * len(self.action.factors)
        for charge in self.factor_charges(monomial):
            totals = [a + b for a, b in zip(totals, charge)]
        return tuple(totals)

    def is_invariant_monomial(self, monomial: Monomial) -> bool:
        return _matches(self.action, self.total_charge(monomial), (Fraction(0),) * len(self.action.factors))

    def is_invariant(self) -> bool:
        return all(self.is_invariant_monomial(m) for m, _ in self.terms())

    def non_invariant(self) -> List[Monomial]:
        return [m for m, _ in self.terms() if not self.is_invariant_monomial(m)]

    def nonlocal_witness(self) -> Optional[Monomial]:
        """An invariant monomial with some factor outside the invariant subalgebra."""
        zero = (Fraction(0),) * len(self.action.factors)
        for monomial, _ in self.terms():
            if not self.is_invariant_monomial(monomial):
                continue
            if any(not _matches(self.action, c, zero) for c in self.factor_charges(monomial)):
                return monomial
        return None

    def __len__(self) -> int:
        return len(self.tensor)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, InvariantChain):
            return NotImplemented
        return self.degree == other.degree and self.tensor == other.tensor

    __hash__ = None  # type: ignore

    def to_json(self) -> ChainPayload:
        terms: List[TensorTerm] = []
        for monomial, c in self.terms():
            terms.append({
                "factors": [list(t.weight) + [t.row, t.col] for t in monomial],
                "charges": [[str(x) for x in ch] for ch in self.factor_charges(monomial)],
                "total_charge": [str(x) for x in self.total_charge(monomial)],
                "scalar": c.to_json(),
            })
        return {"degree": self.degree, "action": self.action.name, "invariant": self.is_invariant(), "terms": terms}

    def __repr__(self) -> str:
        return f"<InvariantChain degree={self.degree} terms={len(self.tensor)} action={self.action.name!r}>"


def chern_character(p: EquivariantProjector, degree: int) -> InvariantChain:
    """The trace contraction ``tr(p (x) ... (x) p)`` with ``degree + 1`` copies of ``p``.

    Parameters
    ----------
    p: :class:`EquivariantProjector`
        The projector.
    degree: :class:`int`
        Even chain degree ``2k``.

    Raises
    ------
    DegreeMismatch
        ``degree`` is negative or odd.
    """
    if degree < 0 or degree % 2:
        raise DegreeMismatch(f"Chern character components live in even degrees, not {degree}")
    n = p.dimension
    total = TensorElement(p.algebra, {})
    for cycle in cartesian(range(n), repeat=degree + 1):
        factors = [p.entries[cycle[a]][cycle[(a + 1) % len(cycle)]] for a in range(len(cycle))]
        if any(not f for f in factors):
            continue
        total = total + TensorElement.from_factors(factors)
    chain = InvariantChain(p.action, total, degree)
    _log.debug("ch_%d of %r has %d monomials", degree, p, len(chain))
    return chain


class Cochain:
    """A linear functional on degree ``k`` chains.

    Explicit cochains are finitely supported combinations of dual-basis
    functionals on tensor monomials. Cochains produced by
    :func:`hochschild_b` are evaluated lazily through their defining rule.

    Attributes
    ----------
    algebra: :class:`CoordAlgebra`
        The algebra the chains live over.
    degree: :class:`int`
        The degree ``k``; the functional eats ``k + 1`` factors.
    """

    __slots__ = ("algebra", "degree", "_values", "_rule")

    def __init__(
        self,
        algebra: CoordAlgebra,
        degree: int,
        values: Optional[Mapping[Monomial, Scalarish]] = None,
        rule: Optional[Callable[[Monomial], QScalar]] = None,
    ) -> None:
        if degree < 0:
            raise DegreeMismatch(f"degree must be non-negative, not {degree}")
        if (values is None) == (rule is None):
            raise ValueError("give exactly one of values and rule")
        self.algebra = algebra
        self.degree = degree
        self._rule = rule
        self._values: Optional[Dict[Monomial, QScalar]] = None
        if values is not None:
            self._values = {}
            for monomial, c in values.items():
                monomial = tuple(monomial)
                if len(monomial) != degree + 1:
                    raise DegreeMismatch(f"monomial with {len(monomial)} factors in a degree {degree} cochain")
                c = c if isinstance(c, QScalar) else QScalar(c)
                if c:
                    self._values[monomial] = c

    @classmethod
    def dual_basis(cls, algebra: CoordAlgebra, monomial: Sequence[MatrixCoeff]) -> Cochain:
        """The functional that is 1 on ``monomial`` and 0 on every other monomial."""
        monomial = tuple(monomial)
        return cls(algebra, len(monomial) - 1, {monomial: QScalar(1)})

    @classmethod
    def from_rule(
        cls,
        algebra: CoordAlgebra,
        degree: int,
        rule: Callable[[Monomial], Scalarish],
        support: Iterable[Sequence[MatrixCoeff]],
    ) -> Cochain:
        """Restrict ``rule`` to the finite set ``support``."""
        return cls(algebra, degree, {tuple(m): rule(tuple(m)) for m in support})

    @property
    def is_finite(self) -> bool:
        return self._values is not None

    def support(self) -> List[Monomial]:
        if self._values is None:
            raise ProjectorError("a rule-defined cochain has no explicit support")
        return sorted(self._values)

    def value(self, monomial: Monomial) -> QScalar:
        if len(monomial) != self.degree + 1:
            raise DegreeMismatch(f"a degree {self.degree} cochain cannot eat {len(monomial)} factors")
        if self._values is not None:
            return self._values.get(monomial, QScalar())
        return self._rule(monomial)  # type: ignore

    def evaluate(self, chain: Union[InvariantChain, TensorElement]) -> QScalar:
        tensor = chain.tensor if isinstance(chain, InvariantChain) else chain
        if not tensor.is_zero() and tensor.length != self.degree + 1:
            raise DegreeMismatch(f"degree {self.degree} cochain paired with a degree {tensor.length - 1} chain")
        total = QScalar()
        for monomial, c in tensor.terms():
            total = total + c * self.value(monomial)
        return total

    def restrict(self, action: ActionSpec) -> Cochain:
        """Drop the monomials that are not fixed by the diagonal action."""
        keep = {}
        for monomial in self.support():
            if InvariantChain(action, TensorElement(self.algebra, {monomial: 1})).is_invariant():
                keep[monomial] = self._values[monomial]  # type: ignore
        return Cochain(self.algebra, self.degree, keep)

    def __add__(self, other: Cochain) -> Cochain:
        if not isinstance(other, Cochain):
            return NotImplemented
        if other.degree != self.degree:
            raise DegreeMismatch(f"cannot add cochains of degree {self.degree} and {other.degree}")
        if self._values is not None and other._values is not None:
            values = dict(self._values)
            for m, c in other._values.items():
                values[m] = values[m] + c if m in values else c
            return Cochain(self.algebra, self.degree, values)
        return Cochain(self.algebra, self.degree, rule=lambda m: self.value(m) + other.value(m))

    def scale(self, factor: Scalarish) -> Cochain:
        if self._values is not None:
            return Cochain(self.algebra, self.degree, {m: c * factor for m, c in self._values.items()})
        return Cochain(self.algebra, self.degree, rule=lambda m: self.value(m) * factor)

    def __repr__(self) -> str:
        size = len(self._values) if self._values is not None else "rule"
        return f"<Cochain degree={self.degree} support={size}>"


def _evaluate_product(tau: Cochain, prefix: Monomial, x: MatrixCoeff, y: MatrixCoeff, suffix: Monomial) -> QScalar:
    algebra = tau.algebra
    product = algebra.multiply(CoordElement(algebra, {x: QScalar(1)}), CoordElement(algebra, {y: QScalar(1)}))
    total = QScalar()
    for t, c in product.terms():
        total = total + c * tau.value(prefix + (t,) + suffix)
    return total


def hochschild_b(tau: Cochain) -> Cochain:
    """The Hochschild coboundary of ``tau``, one degree up.

    ``(b tau)(a_0, ..., a_{k+1}) = sum_i (-1)^i tau(..., a_i a_{i+1}, ...)
    + (-1)^(k+1) tau(a_{k+1} a_0, a_1, ..., a_k)``. The result is evaluated
    lazily; neighbour products may raise :exc:`CutoffOverflow`.
    """
    k = tau.degree

    def rule(monomial: Monomial) -> QScalar:
        total = QScalar()
        for i in range(k + 1):
            term = _evaluate_product(tau, monomial[:i], monomial[i], monomial[i + 1], monomial[i + 2:])
            total = total + term if i % 2 == 0 else total - term
        last = _evaluate_product(tau, (), monomial[k + 1], monomial[0], monomial[1:k + 1])
        return total + last if (k + 1) % 2 == 0 else total - last

    return Cochain(tau.algebra, k + 1, rule=rule)


def cyclic_lambda(tau: Cochain) -> Cochain:
    """``(lambda tau)(a_0, ..., a_k) = (-1)^k tau(a_k, a_0, ..., a_{k-1})``."""
    k = tau.degree
    sign = -1 if k % 2 else 1
    if tau.is_finite:
        values = {}
        for monomial in tau.support():
            values[monomial[1:] + monomial[:1]] = tau.value(monomial) * sign
        return Cochain(tau.algebra, k, values)
    return Cochain(tau.algebra, k, rule=lambda m: tau.value(m[-1:] + m[:-1]) * sign)


def pair_chain(c: Cochain, x: Union[InvariantChain, TensorElement]) -> QScalar:
    """Evaluate a cochain on a chain of the same degree.

    Raises
    ------
    DegreeMismatch
        The degrees differ.
    """
    degree = x.degree if isinstance(x, InvariantChain) else x.length - 1
    if degree != c.degree:
        raise DegreeMismatch(f"cannot pair a degree {c.degree} cochain with a degree {degree} chain")
    return c.evaluate(x)

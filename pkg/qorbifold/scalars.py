from __future__ import annotations

from typing import Dict, Iterable, Iterator, List, Optional, Tuple, Union, TYPE_CHECKING
from fractions import Fraction
from functools import lru_cache
from math import gcd, isfinite, lcm

import cmath
import logging
import math

from sympy import cyclotomic_poly, factorint
from sympy.polys.domains import QQ
from sympy.polys.rings import ring

from .errors import (
    EvaluationError,
    PoleAtOne,
    ScalarDivisionError,
    ScalarError,
    UnrepresentableSqrt,
)

if TYPE_CHECKING:
    from sympy.polys.rings import PolyElement

    from .types.scalar import ScalarPayload

__all__ = (
    "QScalar",
    "Scalarish",
    "q_int",
    "q_factorial",
    "q_binom",
    "eval_numeric",
    "classical_limit",
)

_log = logging.getLogger(__name__)

_RING, _S = ring("s", QQ)
_ZERO = _RING.zero
_ONE = _RING.one

# (radicand, zeta exponent) -> (numerator, monic denominator)
_Key = Tuple["PolyElement", int]
_Frac = Tuple["PolyElement", "PolyElement"]
_Terms = Dict[_Key, _Frac]

Scalarish = Union["QScalar", int, Fraction]


def _qq(value: Union[int, Fraction]) -> object:
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def _fraction(c: object) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))  # type: ignore


def _reduce(num: PolyElement, den: PolyElement) -> _Frac:
    if not num:
        return _ZERO, _ONE
    if not den:
        raise ScalarDivisionError("zero denominator")
    _, num, den = num.cofactors(den)
    c = den.LC
    if c != 1:
        num = num.quo_ground(c)
        den = den.quo_ground(c)
    return num, den


def _add_frac(a: _Frac, b: _Frac) -> _Frac:
    if a[1] == b[1]:
        return _reduce(a[0] + b[0], a[1])
    return _reduce(a[0] * b[1] + b[0] * a[1], a[1] * b[1])


def _mul_frac(a: _Frac, b: _Frac) -> _Frac:
    return _reduce(a[0] * b[0], a[1] * b[1])


def _poly_at_one(p: PolyElement) -> Fraction:
    return sum((_fraction(c) for _, c in p.terms()), Fraction(0))


def _poly_numeric(p: PolyElement, s: float) -> float:
    return sum(
        (int(c.numerator) / int(c.denominator)) * s ** e[0]  # type: ignore
        for e, c in p.terms()
    )


def _split_radicand(r: PolyElement) -> Tuple[int, PolyElement]:
    m = _fraction(r.LC)
    return int(m), r.monic()


def _squarefree_integer(value: Fraction) -> Tuple[Fraction, int]:
    """Write ``value`` as ``c**2 * m`` with ``m`` a squarefree integer carrying the sign."""
    sign = -1 if value < 0 else 1
    a, b = abs(value.numerator), value.denominator
    k, m = 1, 1
    for p, e in factorint(a * b).items():
        k *= p ** (e // 2)
        if e % 2:
            m *= p
    return Fraction(k, b), sign * m


def _radical_product(ra: PolyElement, rb: PolyElement) -> Tuple[_Frac, PolyElement]:
    """sqrt(ra) * sqrt(rb) as ``factor * sqrt(radicand)`` in canonical form."""
    if ra == _ONE:
        return (_ONE, _ONE), rb
    if rb == _ONE:
        return (_ONE, _ONE), ra

    ma, pa = _split_radicand(ra)
    mb, pb = _split_radicand(rb)

    d = gcd(abs(ma), abs(mb))
    m = (abs(ma) // d) * (abs(mb) // d)
    if (ma < 0) != (mb < 0):
        m = -m
    factor = -d if (ma < 0 and mb < 0) else d

    g = pa.gcd(pb)
    rest = pa.exquo(g) * pb.exquo(g)
    return (g.mul_ground(_qq(factor)), _ONE), rest.mul_ground(_qq(m))


@lru_cache(maxsize=None)
def _cyclotomic(order: int) -> Tuple[int, ...]:
    """Coefficients of the ``order``-th cyclotomic polynomial, constant term first."""
    coeffs = cyclotomic_poly(order, polys=True).all_coeffs()
    return tuple(int(c) for c in reversed(coeffs))


@lru_cache(maxsize=None)
def _units(order: int) -> Tuple[int, ...]:
    return tuple(k for k in range(1, order) if gcd(k, order) == 1)


def _normalize(raw: Dict[_Key, _Frac], order: int) -> Tuple[_Terms, int]:
    """Reduce exponents modulo the cyclotomic polynomial and drop zero terms."""
    if order <= 1:
        order = 1
        acc: Dict[_Key, _Frac] = {}
        for (r, _), f in raw.items():
            key = (r, 0)
            acc[key] = _add_frac(acc[key], f) if key in acc else f
        raw = acc
    else:
        coeffs = _cyclotomic(order)
        phi = len(coeffs) - 1
        by_radicand: Dict[PolyElement, Dict[int, _Frac]] = {}
        for (r, z), f in raw.items():
            bucket = by_radicand.setdefault(r, {})
            z %= order
            bucket[z] = _add_frac(bucket[z], f) if z in bucket else f
        raw = {}
        for r, bucket in by_radicand.items():
            for z in range(order - 1, phi - 1, -1):
                f = bucket.pop(z, None)
                if f is None or not f[0]:
                    continue
                # zeta**phi = -sum(a_j zeta**j)
                shift = z - phi
                for j, a in enumerate(coeffs[:-1]):
                    if a == 0:
                        continue
                    contrib = (f[0].mul_ground(_qq(-a)), f[1])
                    key = shift + j
                    bucket[key] = _add_frac(bucket[key], contrib) if key in bucket else _reduce(*contrib)
            for z, f in bucket.items():
                raw[(r, z)] = f

    terms = {k: f for k, f in raw.items() if f[0]}
    if order > 1 and all(z == 0 for _, z in terms):
        order = 1
    return terms, order


def _lift(terms: _Terms, order: int, target: int) -> Dict[_Key, _Frac]:
    if order == target:
        return dict(terms)
    step = target // order
    return {(r, z * step): f for (r, z), f in terms.items()}


def _laurent(coeffs: Dict[int, Union[int, Fraction]]) -> _Frac:
    coeffs = {e: c for e, c in coeffs.items() if c}
    if not coeffs:
        return _ZERO, _ONE
    low = min(min(coeffs), 0)
    num = _RING.from_dict({(e - low,): _qq(c) for e, c in coeffs.items()})
    den = _S ** (-low)
    return _reduce(num, den)


def _gcd_free_basis(polys: Iterable[PolyElement]) -> List[PolyElement]:
    basis = [p for p in polys if p.degree() > 0]
    changed = True
    while changed:
        changed = False
        for i in range(len(basis)):
            for j in range(i + 1, len(basis)):
                g = basis[i].gcd(basis[j])
                if g.degree() > 0:
                    a, b = basis[i].exquo(g), basis[j].exquo(g)
                    rest = [p for k, p in enumerate(basis) if k not in (i, j)]
                    basis = rest + [p for p in (g, a, b) if p.degree() > 0]
                    changed = True
                    break
            if changed:
                break
    return basis


class QScalar:
    """An exact element of the coefficient field.

    The field is :math:`\\mathbb{Q}(s)` with ``s = q**(1/2)``, extended by square
    roots of rational functions and by a primitive root of unity of order
    :attr:`order`. A scalar is a finite sum of terms
    ``(num/den) * sqrt(radicand) * zeta**z`` kept in canonical form, so that
    equal representations mean equal scalars.

    Instances are immutable. They compare by value against other scalars,
    integers and :class:`fractions.Fraction`, and are therefore unhashable.

    Attributes
    ----------
    order: :class:`int`
        Order ``N`` of the adjoined root of unity, ``1`` when no cyclotomic
        part is present.
    """

    __slots__ = ("_terms", "order")

    __hash__ = None  # type: ignore

    def __init__(self, value: Union[int, Fraction] = 0) -> None:
        self._terms: _Terms = {}
        self.order: int = 1
        if value:
            self._terms = {(_ONE, 0): _reduce(_RING(_qq(value)), _ONE)}

    @classmethod
    def _build(cls, raw: Dict[_Key, _Frac], order: int) -> QScalar:
        self = cls.__new__(cls)
        self._terms, self.order = _normalize(raw, order)
        return self

    @classmethod
    def zero(cls) -> QScalar:
        return cls()

    @classmethod
    def one(cls) -> QScalar:
        return cls(1)

    @classmethod
    def from_fraction(cls, value: Union[int, Fraction]) -> QScalar:
        return cls(value)

    @classmethod
    def s_power(cls, n: int, coeff: Union[int, Fraction] = 1) -> QScalar:
        """``coeff * s**n``; ``s_power(2)`` is ``q``."""
        return cls._build({(_ONE, 0): _laurent({n: coeff})}, 1)

    @classmethod
    def laurent(cls, coeffs: Dict[int, Union[int, Fraction]]) -> QScalar:
        """Laurent polynomial in ``s`` from an exponent to coefficient mapping."""
        return cls._build({(_ONE, 0): _laurent(coeffs)}, 1)

    @classmethod
    def rational_function(cls, num: Dict[int, Union[int, Fraction]], den: Dict[int, Union[int, Fraction]]) -> QScalar:
        n, d = _laurent(num), _laurent(den)
        if not n[0]:
            return cls()
        if not d[0]:
            raise ScalarDivisionError("zero denominator")
        return cls._build({(_ONE, 0): _mul_frac(n, (d[1], d[0]))}, 1)

    @classmethod
    def zeta(cls, exponent: int, order: int) -> QScalar:
        """``zeta_N**exponent`` with ``zeta_N = exp(2 pi i / N)``."""
        if order < 1:
            raise ScalarError(f"root of unity order must be positive, not {order}")
        return cls._build({(_ONE, exponent % order): (_ONE, _ONE)}, order)

    def _coerce(self, other: object) -> Optional[QScalar]:
        if isinstance(other, QScalar):
            return other
        if isinstance(other, (int, Fraction)):
            return QScalar(other)
        return None

    def _common(self, other: QScalar) -> Tuple[Dict[_Key, _Frac], Dict[_Key, _Frac], int]:
        order = lcm(self.order, other.order)
        return _lift(self._terms, self.order, order), _lift(other._terms, other.order, order), order

    def __add__(self, other: object) -> QScalar:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        a, b, order = self._common(other)
        for key, f in b.items():
            a[key] = _add_frac(a[key], f) if key in a else f
        return QScalar._build(a, order)

    __radd__ = __add__

    def __neg__(self) -> QScalar:
        return QScalar._build({k: (-n, d) for k, (n, d) in self._terms.items()}, self.order)

    def __sub__(self, other: object) -> QScalar:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: object) -> QScalar:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other: object) -> QScalar:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not self._terms or not other._terms:
            return QScalar()
        a, b, order = self._common(other)
        acc: Dict[_Key, _Frac] = {}
        for (ra, za), fa in a.items():
            for (rb, zb), fb in b.items():
                factor, r = _radical_product(ra, rb)
                f = _mul_frac(_mul_frac(fa, fb), factor)
                key = (r, za + zb)
                acc[key] = _add_frac(acc[key], f) if key in acc else f
        return QScalar._build(acc, order)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> QScalar:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other: object) -> QScalar:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inv()

    def __pow__(self, n: int) -> QScalar:
        if not isinstance(n, int):
            return NotImplemented
        base = self if n >= 0 else self.inv()
        result = QScalar(1)
        for _ in range(abs(n)):
            result = result * base
        return result

    def __eq__(self, other: object) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return (self - other).is_zero()

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_single_term(self) -> bool:
        return len(self._terms) == 1

    def is_rational(self) -> bool:
        """Whether the scalar lies in ``Q(s)``: no radical and no root of unity."""
        return all(r == _ONE and z == 0 for r, z in self._terms)

    def is_constant(self) -> bool:
        return all(
            n.degree() <= 0 and d.degree() <= 0 and r.degree() <= 0 for (r, _), (n, d) in self._terms.items()
        )

    def terms(self) -> Iterator[Tuple[PolyElement, PolyElement, PolyElement, int]]:
        """Iterate ``(num, den, radicand, zeta exponent)`` in a stable order."""
        for (r, z), (n, d) in sorted(self._terms.items(), key=_term_sort_key):
            yield n, d, r, z

    def with_order(self, order: int) -> QScalar:
        if order % self.order:
            raise ScalarError(f"cannot lift order {self.order} to {order}")
        return QScalar._build(_lift(self._terms, self.order, order), order)

    def galois(self, k: int) -> QScalar:
        """Apply ``zeta -> zeta**k`` for ``k`` a unit modulo :attr:`order`."""
        if gcd(k, self.order) != 1:
            raise ScalarError(f"{k} is not a unit modulo {self.order}")
        return QScalar._build({(r, z * k): f for (r, z), f in self._terms.items()}, self.order)

    def _flip(self, divides) -> QScalar:
        raw = {}
        for (r, z), (n, d) in self._terms.items():
            raw[(r, z)] = (-n, d) if divides(r) else (n, d)
        return QScalar._build(raw, self.order)

    def conj(self) -> QScalar:
        """Complex conjugate with ``s`` real and radicals of positive radicands fixed."""
        raw = {}
        for (r, z), (n, d) in self._terms.items():
            if r.LC < 0:
                n = -n
            raw[(r, -z)] = (n, d)
        return QScalar._build(raw, self.order)

    def inv(self) -> QScalar:
        """Multiplicative inverse.

        Multi-term scalars are inverted by multiplying with their cyclotomic
        Galois conjugates and then with the sign-flipped conjugate for every
        radical atom, until the norm is a single rational term.

        Raises
        ------
        ScalarDivisionError
            The scalar is zero.
        ScalarError
            The norm did not collapse, which happens only when radicals and the
            cyclotomic part are not independent.
        """
        if not self._terms:
            raise ScalarDivisionError("inverse of zero")

        if len(self._terms) == 1:
            ((r, z), (n, d)), = self._terms.items()
            # 1/sqrt(r) = sqrt(r)/r
            f = _reduce(d, n * r)
            return QScalar._build({(r, -z): f}, self.order)

        conjugate = QScalar(1)
        norm = self
        if self.order > 1:
            for k in _units(self.order):
                if k == 1:
                    continue
                sigma = self.galois(k)
                conjugate = conjugate * sigma
            norm = self * conjugate

        integers: set = set()
        polys = []
        for r, _ in norm._terms:
            m, p = _split_radicand(r)
            if m < 0:
                integers.add(-1)
            integers.update(factorint(abs(m)))
            polys.append(p)

        for atom in sorted(integers):
            if atom == -1:
                flip = lambda r: r.LC < 0  # noqa: E731
            else:
                flip = lambda r, a=atom: _split_radicand(r)[0] % a == 0  # noqa: E731
            partner = norm._flip(flip)
            conjugate = conjugate * partner
            norm = norm * partner

        for atom in _gcd_free_basis(polys):
            partner = norm._flip(lambda r, a=atom: not r.monic().rem(a))
            conjugate = conjugate * partner
            norm = norm * partner

        if not norm.is_single_term() or not norm.is_rational():
            raise ScalarError(f"could not invert {self!r}: norm {norm!r} is not rational")
        return conjugate * norm.inv()

    def sqrt(self) -> QScalar:
        """A square root of a single-term scalar.

        The rational part is split by squarefree decomposition into a square
        times a squarefree radicand. The result satisfies ``x.sqrt() ** 2 == x``.

        Raises
        ------
        UnrepresentableSqrt
            The scalar has more than one term, or already carries a radical.
        """
        if not self._terms:
            return QScalar()
        if len(self._terms) != 1:
            raise UnrepresentableSqrt(self)
        ((r, z), (n, d)), = self._terms.items()
        if r != _ONE:
            raise UnrepresentableSqrt(self, "radicand of a radical")

        product = n * d
        c = _fraction(product.LC)
        _, factors = product.monic().sqf_list()
        square, radicand = _ONE, _ONE
        for f, k in factors:
            f = f.monic()
            square = square * f ** (k // 2)
            if k % 2:
                radicand = radicand * f
        outer, m = _squarefree_integer(c)
        radicand = radicand.mul_ground(_qq(m))
        f = _reduce(square.mul_ground(_qq(outer)), d)

        result = QScalar._build({(radicand, 0): f}, 1)
        if z:
            result = result * QScalar.zeta(z, 2 * self.order)
        return result

    def to_json(self) -> ScalarPayload:
        return [
            {
                "num": _poly_pairs(n),
                "den": _poly_pairs(d),
                "radicand": _poly_pairs(r),
                "zeta": z,
                "order": self.order,
            }
            for n, d, r, z in self.terms()
        ]

    @classmethod
    def from_json(cls, payload: ScalarPayload) -> QScalar:
        result = cls()
        for term in payload:
            num = _RING.from_dict({(e,): _qq(Fraction(c)) for c, e in term["num"]}) if term["num"] else _ZERO
            den = _RING.from_dict({(e,): _qq(Fraction(c)) for c, e in term["den"]})
            rad = _RING.from_dict({(e,): _qq(Fraction(c)) for c, e in term["radicand"]})
            order = term.get("order", 1)
            one = cls._build({(_ONE, 0): _reduce(num, den)}, 1)
            root = cls._build({(_ONE, 0): _reduce(rad, _ONE)}, 1).sqrt() if rad != _ONE else cls(1)
            result = result + one * root * cls.zeta(term["zeta"], order)
        return result

    def __complex__(self) -> complex:
        if not self.is_constant():
            raise EvaluationError(f"{self!r} depends on s; use eval_numeric")
        total = 0j
        for n, d, r, z in self.terms():
            value = complex(float(_poly_at_one(n) / _poly_at_one(d)))
            value *= cmath.sqrt(float(_poly_at_one(r)))
            value *= cmath.exp(2j * math.pi * z / self.order)
            total += value
        return total

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for n, d, r, z in self.terms():
            text = f"({n.as_expr()})"
            if d != _ONE:
                text += f"/({d.as_expr()})"
            if r != _ONE:
                text += f"*sqrt({r.as_expr()})"
            if z:
                text += f"*zeta{self.order}**{z}"
            parts.append(text)
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"<QScalar {self}>"


def _term_sort_key(item: Tuple[_Key, _Frac]) -> Tuple:
    (r, z), _ = item
    return (r.degree(), sorted((e, _fraction(c)) for e, c in r.terms()), z)


def _poly_pairs(p: PolyElement) -> List[list]:
    pairs = []
    for (e,), c in sorted(p.terms()):
        value = _fraction(c)
        pairs.append([value.numerator if value.denominator == 1 else str(value), e])
    return pairs


@lru_cache(maxsize=None)
def _q_int_cached(n: int, d: int) -> QScalar:
    sign = 1 if n >= 0 else -1
    size = abs(n)
    return QScalar.laurent({2 * d * (size - 1 - 2 * j): sign for j in range(size)})


def q_int(n: int, d: int = 1) -> QScalar:
    """The ``q_i``-integer :math:`[n]_{q_i}` with ``q_i = q**d``.

    Parameters
    ----------
    n: :class:`int`
        May be negative; ``[-n] = -[n]``.
    d: :class:`int`
        Symmetrizer, at least ``1``.

    Returns
    -------
    :class:`QScalar`
        A Laurent polynomial in ``s``.
    """
    if d < 1:
        raise ScalarError(f"symmetrizer must be positive, not {d}")
    return _q_int_cached(n, d)


def q_factorial(n: int, d: int = 1) -> QScalar:
    if n < 0:
        raise ScalarError(f"q-factorial of negative {n}")
    result = QScalar(1)
    for j in range(1, n + 1):
        result = result * q_int(j, d)
    return result


def q_binom(m: int, k: int, d: int = 1) -> QScalar:
    """The ``q_i``-binomial coefficient as an exact factorial ratio."""
    if not 0 <= k <= m:
        raise ScalarError(f"q-binomial needs 0 <= k <= m, got m={m}, k={k}")
    return q_factorial(m, d) / (q_factorial(k, d) * q_factorial(m - k, d))


def eval_numeric(x: QScalar, q: float) -> complex:
    """Evaluate ``x`` at ``s = sqrt(q)`` with ``zeta -> exp(2 pi i / N)``.

    Raises
    ------
    EvaluationError
        ``q`` is outside ``(0, 1)``, a radicand is negative there, or the
        result is not finite.
    """
    if not 0.0 < q < 1.0:
        raise EvaluationError(f"q must lie in (0, 1), not {q}")
    s = math.sqrt(q)
    total = 0j
    for n, d, r, z in x.terms():
        radicand = _poly_numeric(r, s)
        if radicand < 0:
            raise EvaluationError(f"negative radicand {r.as_expr()} at q={q}")
        value = _poly_numeric(n, s) / _poly_numeric(d, s) * math.sqrt(radicand)
        total += value * cmath.exp(2j * math.pi * z / x.order)
    if not (isfinite(total.real) and isfinite(total.imag)):
        raise EvaluationError(f"non-finite value of {x!r} at q={q}")
    return total


def classical_limit(x: QScalar) -> QScalar:
    """The value of ``x`` at ``s = 1`` as an ``s``-free scalar.

    Raises
    ------
    PoleAtOne
        A reduced denominator vanishes at ``s = 1``.
    """
    result = QScalar()
    for n, d, r, z in x.terms():
        den = _poly_at_one(d)
        if den == 0:
            raise PoleAtOne(f"{x!r} has a pole at s = 1")
        value = QScalar(_poly_at_one(n) / den)
        radicand = _poly_at_one(r)
        if r != _ONE:
            value = value * QScalar(radicand).sqrt()
        if z:
            value = value * QScalar.zeta(z, x.order)
        result = result + value
    return result

from __future__ import annotations

from typing import (
    Dict,
    Iterable,
    Iterator,
    List,
    Mapping,
    NamedTuple,
    Optional,
    Sequence,
    Tuple,
    Union,
    TYPE_CHECKING,
)
from itertools import product as cartesian

import logging
import threading

from .errors import CutoffOverflow, RepresentationError, WordLengthExceeded
from .linalg import Matrix, Vector, inverse
from .repcat import (
    A1,
    A2,
    RootDatum,
    Weight,
    canonical_irrep,
    dual,
    highest_weight_vectors,
    intertwiner,
    is_dominant,
    root_datum,
    tensor_decomposition,
)
from .report import Report
from .scalars import QScalar, Scalarish
from .utils import _JSON_LOADER, _to_json, cache_dir, copy_doc

if TYPE_CHECKING:
    from .types.coord import CoordPayload

__all__ = (
    "PLACEMENTS",
    "ORIENTATIONS",
    "PRODUCT_PLACEMENT",
    "MatrixCoeff",
    "UqMonomial",
    "CoordAlgebra",
    "CoordElement",
    "TensorElement",
    "GNSMatrix",
    "generators",
    "verify_hopf",
    "verify_su2_relations",
    "verify_su3_relations",
    "audit_product_placement",
    "su3_relation_orientation_audit",
)

_log = logging.getLogger(__name__)

# "standard": row pair in the first CG slot, column pair conjugated in the second
PLACEMENTS = ("standard", "swapped")
# product orientations for the SU(3) relation audit; "reversed" reads x y as y x
ORIENTATIONS = ("standard", "reversed")
PRODUCT_PLACEMENT = "standard"


class MatrixCoeff(NamedTuple):
    """The matrix coefficient ``t^weight_{row, col}`` with 0-based canonical labels."""

    weight: Weight
    row: int
    col: int

    def __str__(self) -> str:
        label = ",".join(str(c) for c in self.weight)
        return f"t^({label})_{self.row},{self.col}"


_LETTERS = ("e", "f", "k", "kinv")


class UqMonomial:
    """A word in the generators ``e_i, f_i, k_i, k_i^-1``.

    Attributes
    ----------
    root_datum: :class:`RootDatum`
        Cartan data the letters refer to.
    word: Tuple[Tuple[:class:`str`, :class:`int`], ...]
        Letters, leftmost factor first, with 0-based indices.
    """

    __slots__ = ("root_datum", "word")

    MAX_LENGTH: int = 8

    def __init__(self, root_datum: RootDatum, word: Sequence[Tuple[str, int]] = (), max_length: Optional[int] = None) -> None:
        limit = self.MAX_LENGTH if max_length is None else max_length
        word = tuple((str(kind), int(i)) for kind, i in word)
        if len(word) > limit:
            raise WordLengthExceeded(f"word of length {len(word)} exceeds {limit}")
        for kind, i in word:
            if kind not in _LETTERS or not 0 <= i < root_datum.rank:
                raise RepresentationError(f"invalid generator letter {kind}{i + 1}")
        self.root_datum = root_datum
        self.word = word

    @classmethod
    def generator(cls, rd: RootDatum, kind: str, i: int) -> UqMonomial:
        return cls(rd, ((kind, i),))

    @classmethod
    def parse(cls, rd: RootDatum, text: str) -> UqMonomial:
        """Parse ``"e1 f2 k1 k1^-1"``; the empty string is the unit."""
        word = []
        for token in text.replace("*", " ").split():
            inverse_ = token.endswith("^-1")
            token = token[:-3] if inverse_ else token
            kind, index = token[0], token[1:]
            if kind not in "efk" or not index.isdigit():
                raise RepresentationError(f"cannot parse generator {token!r}")
            if inverse_ and kind != "k":
                raise RepresentationError(f"only k has an inverse letter, got {token!r}")
            word.append(("kinv" if inverse_ else kind, int(index) - 1))
        return cls(rd, word)

    @classmethod
    def generating_set(cls, rd: RootDatum) -> List[UqMonomial]:
        return [cls.generator(rd, kind, i) for i in range(rd.rank) for kind in ("e", "f", "k")]

    def __mul__(self, other: UqMonomial) -> UqMonomial:
        return UqMonomial(self.root_datum, self.word + other.word)

    def __len__(self) -> int:
        return len(self.word)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, UqMonomial) and other.root_datum == self.root_datum and other.word == self.word

    def __hash__(self) -> int:
        return hash((self.root_datum, self.word))

    def coproduct(self) -> List[Tuple[UqMonomial, UqMonomial]]:
        """Expansion of the coproduct as a list of word pairs, all with coefficient 1."""
        pairs: List[Tuple[Tuple, Tuple]] = [((), ())]
        for kind, i in self.word:
            if kind == "k" or kind == "kinv":
                options = [((kind, i), (kind, i))]
            else:
                options = [((kind, i), ("k", i)), (("kinv", i), (kind, i))]
            pairs = [(a + (x,), b + (y,)) for a, b in pairs for x, y in options]
        limit = max(len(self.word), self.MAX_LENGTH)
        return [(UqMonomial(self.root_datum, a, limit), UqMonomial(self.root_datum, b, limit)) for a, b in pairs]

    def antipode_theta(self) -> Tuple[QScalar, UqMonomial]:
        """The anti-homomorphism ``S o theta``: ``e -> q_i^-1 f``, ``f -> q_i e``, ``k -> k``."""
        coeff = QScalar(1)
        letters = []
        for kind, i in reversed(self.word):
            d = self.root_datum.symmetrizers[i]
            if kind == "e":
                coeff = coeff * QScalar.s_power(-2 * d)
                letters.append(("f", i))
            elif kind == "f":
                coeff = coeff * QScalar.s_power(2 * d)
                letters.append(("e", i))
            else:
                letters.append((kind, i))
        return coeff, UqMonomial(self.root_datum, letters, max(len(letters), self.MAX_LENGTH))

    def __str__(self) -> str:
        if not self.word:
            return "1"
        return " ".join(f"k{i + 1}^-1" if kind == "kinv" else f"{kind}{i + 1}" for kind, i in self.word)

    def __repr__(self) -> str:
        return f"<UqMonomial {self}>"


class _Block(NamedTuple):
    weight: Weight
    rows: Tuple[Dict[int, QScalar], ...]


class _DualData(NamedTuple):
    weight: Weight
    u_rows: Tuple[Dict[int, QScalar], ...]
    uinv_cols: Tuple[Dict[int, QScalar], ...]


class CoordAlgebra:
    """The quantized coordinate algebra of ``SU(2)`` or ``SU(3)``.

    This is the per-computation context: it owns the root datum, the weight
    cutoff, the frozen product placement, and caches of Clebsch-Gordan data
    and basis products. Caches are filled under a lock, so a shared algebra
    may be read from several threads.

    Parameters
    ----------
    group: Union[:class:`str`, :class:`RootDatum`]
        ``"su2"``, ``"su3"`` or a root datum.
    cutoff: :class:`int`
        Largest coordinate allowed in a highest weight; products beyond it
        raise :exc:`CutoffOverflow`.
    placement: :class:`str`
        Clebsch-Gordan index placement, one of :data:`PLACEMENTS`.
    persist: :class:`bool`
        Whether to read and write decompositions under ``QORB_CACHE_DIR``.
    """

    __slots__ = ("root_datum", "cutoff", "placement", "persist", "_lock", "_blocks", "_products", "_duals")

    def __init__(
        self,
        group: Union[str, RootDatum] = "su2",
        cutoff: int = 4,
        placement: str = PRODUCT_PLACEMENT,
        persist: bool = True,
    ) -> None:
        if cutoff < 0:
            raise ValueError(f"cutoff must be non-negative, not {cutoff}")
        if placement not in PLACEMENTS:
            raise ValueError(f"unknown placement {placement!r}")
        self.root_datum = group if isinstance(group, RootDatum) else root_datum(group)
        self.cutoff = cutoff
        self.placement = placement
        self.persist = persist
        self._lock = threading.Lock()
        self._blocks: Dict[Tuple[Weight, Weight], Tuple[_Block, ...]] = {}
        self._products: Dict[Tuple[MatrixCoeff, MatrixCoeff], Dict[MatrixCoeff, QScalar]] = {}
        self._duals: Dict[Weight, _DualData] = {}

    @property
    def group(self) -> str:
        return self.root_datum.group

    def dimension(self, weight: Weight) -> int:
        return canonical_irrep(self.root_datum, weight).dimension

    def weights_of(self, coeff: MatrixCoeff) -> Tuple[Weight, Weight]:
        """Weights of the row and column basis vectors of a coefficient."""
        rep = canonical_irrep(self.root_datum, coeff.weight)
        return rep.weights[coeff.row], rep.weights[coeff.col]

    def check_cutoff(self, weight: Weight, limit: Optional[int] = None) -> None:
        limit = self.cutoff if limit is None else limit
        if max(weight, default=0) > limit:
            raise CutoffOverflow(weight, limit)

    def dominant_weights(self, cutoff: Optional[int] = None) -> List[Weight]:
        cutoff = self.cutoff if cutoff is None else cutoff
        ranges = [range(cutoff + 1)] * self.root_datum.rank
        return sorted((tuple(w) for w in cartesian(*ranges)), key=lambda w: (max(w, default=0), sum(w), w))

    def basis(self, cutoff: Optional[int] = None) -> List[MatrixCoeff]:
        """All matrix coefficients with highest weight coordinates at most ``cutoff``."""
        out = []
        for w in self.dominant_weights(cutoff):
            dim = self.dimension(w)
            out.extend(MatrixCoeff(w, a, b) for a in range(dim) for b in range(dim))
        return out

    def unit(self) -> CoordElement:
        return self.coefficient((0,) * self.root_datum.rank, 0, 0)

    def zero(self) -> CoordElement:
        return CoordElement(self, {})

    def coefficient(self, weight: Sequence[int], row: int, col: int, scalar: Scalarish = 1) -> CoordElement:
        weight = tuple(weight)
        if not is_dominant(weight) or len(weight) != self.root_datum.rank:
            raise RepresentationError(f"{weight} is not a dominant weight of {self.root_datum.name}")
        dim = self.dimension(weight)
        if not (0 <= row < dim and 0 <= col < dim):
            raise RepresentationError(f"labels ({row}, {col}) outside a module of dimension {dim}")
        return CoordElement(self, {MatrixCoeff(weight, row, col): scalar})

    def element(self, terms: Mapping[MatrixCoeff, Scalarish]) -> CoordElement:
        return CoordElement(self, dict(terms))

    def _cache_path(self, left: Weight, right: Weight):
        directory = cache_dir() if self.persist else None
        if directory is None:
            return None
        name = "cg-{0}-{1}-{2}.json".format(
            self.root_datum.name, "_".join(map(str, left)), "_".join(map(str, right))
        )
        return directory / name

    def _load_blocks(self, path) -> Optional[Tuple[_Block, ...]]:
        try:
            payload = _JSON_LOADER(path.read_text(encoding="utf-8"))
        except (OSError, ValueError):
            return None
        blocks = []
        for block in payload["blocks"]:
            rows = tuple({int(k): QScalar.from_json(v) for k, v in row} for row in block["rows"])
            blocks.append(_Block(tuple(block["weight"]), rows))
        _log.debug("loaded Clebsch-Gordan data from %s", path)
        return tuple(blocks)

    def _store_blocks(self, path, blocks: Tuple[_Block, ...]) -> None:
        payload = {
            "blocks": [
                {"weight": list(b.weight), "rows": [[[k, v.to_json()] for k, v in sorted(row.items())] for row in b.rows]}
                for b in blocks
            ]
        }
        try:
            path.write_text(_to_json(payload, sort_keys=True), encoding="utf-8")
        except OSError as exc:
            _log.warning("could not persist Clebsch-Gordan data to %s: %s", path, exc)

    def blocks(self, left: Weight, right: Weight) -> Tuple[_Block, ...]:
        """Row-indexed Clebsch-Gordan blocks of ``M_left (x) M_right``."""
        key = (left, right)
        cached = self._blocks.get(key)
        if cached is not None:
            return cached
        with self._lock:
            cached = self._blocks.get(key)
            if cached is not None:
                return cached
            path = self._cache_path(left, right)
            blocks = self._load_blocks(path) if path is not None and path.exists() else None
            if blocks is None:
                _log.debug("decomposing %s ⊗ %s", left, right)
                blocks = tuple(
                    _Block(e.weight, tuple(e.matrix.row_dicts()))
                    for e in tensor_decomposition(self.root_datum, left, right)
                )
                if path is not None:
                    self._store_blocks(path, blocks)
            self._blocks[key] = blocks
            return blocks

    def _dual_data(self, weight: Weight) -> _DualData:
        cached = self._duals.get(weight)
        if cached is not None:
            return cached
        with self._lock:
            cached = self._duals.get(weight)
            if cached is not None:
                return cached
            rd = self.root_datum
            module = dual(canonical_irrep(rd, weight))
            (top_weight, top), = highest_weight_vectors(module)
            top = {i: v / top[min(top)] for i, v in top.items()}
            U = intertwiner(module, top_weight, top)
            data = _DualData(top_weight, tuple(U.row_dicts()), tuple(inverse(U).columns()))
            self._duals[weight] = data
            return data

    def basis_product(self, a: MatrixCoeff, b: MatrixCoeff, limit: Optional[int] = None) -> Dict[MatrixCoeff, QScalar]:
        """Product of two basis coefficients by Clebsch-Gordan contraction."""
        key = (a, b)
        cached = self._products.get(key)
        if cached is None:
            cached = {}
            dim_right = self.dimension(b.weight)
            row_index = a.row * dim_right + b.row
            col_index = a.col * dim_right + b.col
            for block in self.blocks(a.weight, b.weight):
                rows = block.rows[row_index]
                cols = block.rows[col_index]
                if not rows or not cols:
                    continue
                for k, x in rows.items():
                    for k2, y in cols.items():
                        if self.placement == "standard":
                            coeff, label = x * y.conj(), MatrixCoeff(block.weight, k, k2)
                        else:
                            coeff, label = y * x.conj(), MatrixCoeff(block.weight, k2, k)
                        value = cached.get(label, QScalar()) + coeff
                        if value:
                            cached[label] = value
                        else:
                            cached.pop(label, None)
            with self._lock:
                self._products[key] = cached
        limit = self.cutoff if limit is None else limit
        for coeff in cached:
            self.check_cutoff(coeff.weight, limit)
        return cached

    def multiply(self, a: CoordElement, b: CoordElement, limit: Optional[int] = None) -> CoordElement:
        """Bilinear product; raises :exc:`CutoffOverflow` past the cutoff."""
        out: Dict[MatrixCoeff, QScalar] = {}
        for ta, ca in a._terms.items():
            for tb, cb in b._terms.items():
                c = ca * cb
                for t, v in self.basis_product(ta, tb, limit).items():
                    out[t] = out.get(t, QScalar()) + c * v
        return CoordElement(self, out)

    def star(self, a: CoordElement) -> CoordElement:
        """The involution; conjugate-linear, lands in the dual highest weight."""
        out: Dict[MatrixCoeff, QScalar] = {}
        for t, c in a._terms.items():
            data = self._dual_data(t.weight)
            c = c.conj()
            for col_a, u in data.u_rows[t.row].items():
                for row_b, v in data.uinv_cols[t.col].items():
                    label = MatrixCoeff(data.weight, col_a, row_b)
                    out[label] = out.get(label, QScalar()) + c * u * v
        return CoordElement(self, out)

    def antipode(self, a: CoordElement) -> CoordElement:
        out: Dict[MatrixCoeff, QScalar] = {}
        for t, c in a._terms.items():
            data = self._dual_data(t.weight)
            for col_a, u in data.u_rows[t.col].items():
                for row_b, v in data.uinv_cols[t.row].items():
                    label = MatrixCoeff(data.weight, col_a, row_b)
                    out[label] = out.get(label, QScalar()) + c * u * v
        return CoordElement(self, out)

    def coproduct(self, a: CoordElement) -> TensorElement:
        """``t_{mu nu} -> sum_eta t_{mu eta} (x) t_{eta nu}``."""
        out: Dict[Tuple[MatrixCoeff, ...], QScalar] = {}
        for t, c in a._terms.items():
            for eta in range(self.dimension(t.weight)):
                key = (MatrixCoeff(t.weight, t.row, eta), MatrixCoeff(t.weight, eta, t.col))
                out[key] = out.get(key, QScalar()) + c
        return TensorElement(self, out)

    def counit(self, a: CoordElement) -> QScalar:
        total = QScalar()
        for t, c in a._terms.items():
            if t.row == t.col:
                total = total + c
        return total

    def pair(self, a: CoordElement, x: UqMonomial) -> QScalar:
        """The pairing ``t(x) = <u_mu, rho(x) u_nu>``."""
        total = QScalar()
        matrices: Dict[Weight, Matrix] = {}
        for t, c in a._terms.items():
            m = matrices.get(t.weight)
            if m is None:
                m = matrices[t.weight] = canonical_irrep(self.root_datum, t.weight).word_matrix(x.word)
            total = total + c * m[t.row, t.col]
        return total

    def right_action(self, x: UqMonomial, a: CoordElement) -> CoordElement:
        """``d(x) t_{mu nu} = sum_eta rho(x)[eta, nu] t_{mu eta}``."""
        out: Dict[MatrixCoeff, QScalar] = {}
        for t, c in a._terms.items():
            m = canonical_irrep(self.root_datum, t.weight).word_matrix(x.word)
            for eta, v in m.column(t.col).items():
                label = MatrixCoeff(t.weight, t.row, eta)
                out[label] = out.get(label, QScalar()) + c * v
        return CoordElement(self, out)

    def left_action(self, x: UqMonomial, a: CoordElement) -> CoordElement:
        """``l(x) t_{mu nu} = sum_eta rho(S theta(x))[mu, eta] t_{eta nu}``."""
        coeff, image = x.antipode_theta()
        out: Dict[MatrixCoeff, QScalar] = {}
        for t, c in a._terms.items():
            m = canonical_irrep(self.root_datum, t.weight).word_matrix(image.word)
            for eta, v in m.row(t.row).items():
                label = MatrixCoeff(t.weight, eta, t.col)
                out[label] = out.get(label, QScalar()) + c * coeff * v
        return CoordElement(self, out)

    def gns_matrix(self, a: CoordElement, cutoff: Optional[int] = None) -> GNSMatrix:
        """Matrix of left multiplication on the span of coefficients up to ``cutoff``.

        Columns whose product leaves the retained span are flagged instead of
        raising; their in-span entries are still filled in.
        """
        cutoff = self.cutoff if cutoff is None else cutoff
        basis = self.basis(cutoff)
        index = {t: i for i, t in enumerate(basis)}
        span = max((max(t.weight, default=0) for t in a._terms), default=0)
        limit = max(self.cutoff, cutoff + span)
        entries = {}
        overflow = []
        for j, b in enumerate(basis):
            product = self.multiply(a, CoordElement(self, {b: QScalar(1)}), limit)
            flagged = False
            for t, v in product._terms.items():
                i = index.get(t)
                if i is None:
                    flagged = True
                else:
                    entries[(i, j)] = v
            overflow.append(flagged)
        return GNSMatrix(Matrix(len(basis), len(basis), entries), tuple(basis), tuple(overflow))

    def generators(self) -> Dict[str, CoordElement]:
        """Named generators: ``alpha, beta`` for su2, ``t11 .. t33`` for su3."""
        if self.root_datum == A1:
            return {"alpha": self.coefficient((1,), 0, 0), "beta": self.coefficient((1,), 0, 1)}
        if self.root_datum == A2:
            return {f"t{i + 1}{j + 1}": self.coefficient((1, 0), i, j) for i in range(3) for j in range(3)}
        raise RepresentationError(f"no named generators for {self.root_datum.name}")

    def element_from_json(self, payload: CoordPayload) -> CoordElement:
        terms = {}
        for term in payload:
            terms[MatrixCoeff(tuple(term["weight"]), term["mu"], term["nu"])] = QScalar.from_json(term["scalar"])
        return CoordElement(self, terms)

    def __repr__(self) -> str:
        return f"<CoordAlgebra group={self.group} cutoff={self.cutoff} placement={self.placement}>"


class CoordElement:
    """A finite linear combination of matrix coefficients.

    Elements are immutable and tied to the :class:`CoordAlgebra` that
    multiplies them. Zero coefficients are never stored.
    """

    __slots__ = ("algebra", "_terms")

    __hash__ = None  # type: ignore

    def __init__(self, algebra: CoordAlgebra, terms: Mapping[MatrixCoeff, Scalarish]) -> None:
        self.algebra = algebra
        self._terms: Dict[MatrixCoeff, QScalar] = {}
        for t, c in terms.items():
            c = c if isinstance(c, QScalar) else QScalar(c)
            if c:
                self._terms[t] = c

    def terms(self) -> Iterator[Tuple[MatrixCoeff, QScalar]]:
        for t in sorted(self._terms):
            yield t, self._terms[t]

    def coefficient_of(self, t: MatrixCoeff) -> QScalar:
        return self._terms.get(t, QScalar())

    def support(self) -> List[MatrixCoeff]:
        return sorted(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __add__(self, other: CoordElement) -> CoordElement:
        if not isinstance(other, CoordElement):
            return NotImplemented
        terms = dict(self._terms)
        for t, c in other._terms.items():
            terms[t] = terms[t] + c if t in terms else c
        return CoordElement(self.algebra, terms)

    def __neg__(self) -> CoordElement:
        return CoordElement(self.algebra, {t: -c for t, c in self._terms.items()})

    def __sub__(self, other: CoordElement) -> CoordElement:
        if not isinstance(other, CoordElement):
            return NotImplemented
        return self + (-other)

    def scale(self, factor: Scalarish) -> CoordElement:
        return CoordElement(self.algebra, {t: c * factor for t, c in self._terms.items()})

    def __mul__(self, other: Union[CoordElement, Scalarish]) -> CoordElement:
        if isinstance(other, CoordElement):
            return self.algebra.multiply(self, other)
        if isinstance(other, (QScalar, int)) or hasattr(other, "denominator"):
            return self.scale(other)  # type: ignore
        return NotImplemented

    def __rmul__(self, other: Scalarish) -> CoordElement:
        return self.scale(other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CoordElement):
            return NotImplemented
        return (self - other).is_zero()

    @copy_doc(CoordAlgebra.star)
    def star(self) -> CoordElement:
        return self.algebra.star(self)

    def antipode(self) -> CoordElement:
        return self.algebra.antipode(self)

    @copy_doc(CoordAlgebra.coproduct)
    def coproduct(self) -> TensorElement:
        return self.algebra.coproduct(self)

    def counit(self) -> QScalar:
        return self.algebra.counit(self)

    @copy_doc(CoordAlgebra.pair)
    def pair(self, x: UqMonomial) -> QScalar:
        return self.algebra.pair(self, x)

    def to_json(self) -> CoordPayload:
        return [{"weight": list(t.weight), "mu": t.row, "nu": t.col, "scalar": c.to_json()} for t, c in self.terms()]

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(f"({c})*{t}" for t, c in self.terms())

    def __repr__(self) -> str:
        return f"<CoordElement terms={len(self._terms)}>"


class TensorElement:
    """A finite combination of tensor monomials of matrix coefficients.

    A monomial with ``m`` factors lives in the ``m``-fold tensor power; chains
    of degree ``k`` use ``k + 1`` factors.
    """

    __slots__ = ("algebra", "_terms")

    __hash__ = None  # type: ignore

    def __init__(self, algebra: CoordAlgebra, terms: Mapping[Tuple[MatrixCoeff, ...], Scalarish]) -> None:
        self.algebra = algebra
        self._terms: Dict[Tuple[MatrixCoeff, ...], QScalar] = {}
        for key, c in terms.items():
            c = c if isinstance(c, QScalar) else QScalar(c)
            if c:
                self._terms[tuple(key)] = c

    @classmethod
    def from_factors(cls, factors: Sequence[CoordElement]) -> TensorElement:
        """Expand ``a_0 (x) a_1 (x) ... (x) a_k``."""
        algebra = factors[0].algebra
        terms: Dict[Tuple[MatrixCoeff, ...], QScalar] = {(): QScalar(1)}
        for factor in factors:
            nxt: Dict[Tuple[MatrixCoeff, ...], QScalar] = {}
            for key, c in terms.items():
                for t, v in factor._terms.items():
                    k2 = key + (t,)
                    nxt[k2] = nxt.get(k2, QScalar()) + c * v
            terms = nxt
        return cls(algebra, terms)

    @property
    def length(self) -> int:
        return len(next(iter(self._terms))) if self._terms else 0

    def terms(self) -> Iterator[Tuple[Tuple[MatrixCoeff, ...], QScalar]]:
        for key in sorted(self._terms):
            yield key, self._terms[key]

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __add__(self, other: TensorElement) -> TensorElement:
        if not isinstance(other, TensorElement):
            return NotImplemented
        terms = dict(self._terms)
        for key, c in other._terms.items():
            terms[key] = terms[key] + c if key in terms else c
        return TensorElement(self.algebra, terms)

    def __neg__(self) -> TensorElement:
        return TensorElement(self.algebra, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other: TensorElement) -> TensorElement:
        return self + (-other)

    def scale(self, factor: Scalarish) -> TensorElement:
        return TensorElement(self.algebra, {k: c * factor for k, c in self._terms.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorElement):
            return NotImplemented
        return (self - other).is_zero()

    def map_factor(self, position: int, fn) -> TensorElement:
        """Apply a linear map ``MatrixCoeff -> CoordElement`` to one factor."""
        out: Dict[Tuple[MatrixCoeff, ...], QScalar] = {}
        for key, c in self._terms.items():
            image = fn(CoordElement(self.algebra, {key[position]: QScalar(1)}))
            for t, v in image._terms.items():
                k2 = key[:position] + (t,) + key[position + 1:]
                out[k2] = out.get(k2, QScalar()) + c * v
        return TensorElement(self.algebra, out)

    def expand_factor(self, position: int, fn) -> TensorElement:
        """Replace one factor by a :class:`TensorElement` image, splicing it in place."""
        out: Dict[Tuple[MatrixCoeff, ...], QScalar] = {}
        for key, c in self._terms.items():
            image = fn(CoordElement(self.algebra, {key[position]: QScalar(1)}))
            for sub, v in image._terms.items():
                k2 = key[:position] + sub + key[position + 1:]
                out[k2] = out.get(k2, QScalar()) + c * v
        return TensorElement(self.algebra, out)

    def contract(self, fn) -> QScalar:
        """Sum of ``c * fn(monomial)`` over all monomials."""
        total = QScalar()
        for key, c in self._terms.items():
            total = total + c * fn(key)
        return total

    def multiply_out(self) -> CoordElement:
        """Apply the multiplication map to every monomial."""
        algebra = self.algebra
        out = algebra.zero()
        for key, c in self._terms.items():
            value = algebra.unit()
            for t in key:
                value = algebra.multiply(value, CoordElement(algebra, {t: QScalar(1)}))
            out = out + value.scale(c)
        return out

    def __repr__(self) -> str:
        return f"<TensorElement terms={len(self._terms)} length={self.length}>"


class GNSMatrix(NamedTuple):
    """Truncated left-multiplication matrix with per-column overflow flags."""

    matrix: Matrix
    basis: Tuple[MatrixCoeff, ...]
    overflow: Tuple[bool, ...]

    def retained(self) -> List[int]:
        return [j for j, flagged in enumerate(self.overflow) if not flagged]


def generators(group: str, cutoff: int = 4) -> Dict[str, CoordElement]:
    """Named generators of a fresh algebra, plus ``"unit"``."""
    algebra = CoordAlgebra(group, cutoff)
    gens = algebra.generators()
    gens["unit"] = algebra.unit()
    return gens


def _sample_elements(algebra: CoordAlgebra) -> Dict[str, CoordElement]:
    gens = algebra.generators()
    samples = dict(gens)
    samples["unit"] = algebra.unit()
    return samples


def verify_hopf(algebra: CoordAlgebra, samples: Optional[Dict[str, CoordElement]] = None) -> Report:
    """Exact Hopf-algebra identities on generators and generator pairs.

    Checks coassociativity, both counit laws, the antipode axiom on both sides,
    star anti-multiplicativity and involutivity, the equivariance of products
    under the right action, and that left and right actions commute.
    """
    samples = samples or _sample_elements(algebra)
    report = Report("hopf", {"group": algebra.group, "cutoff": algebra.cutoff, "placement": algebra.placement})
    unit = algebra.unit()
    xs = UqMonomial.generating_set(algebra.root_datum)

    for name, t in samples.items():
        delta = algebra.coproduct(t)
        lhs = delta.expand_factor(0, algebra.coproduct)
        rhs = delta.expand_factor(1, algebra.coproduct)
        report.check(f"coassociativity/{name}", lhs == rhs)

        left = algebra.zero()
        right = algebra.zero()
        for (a, b), c in delta.terms():
            left = left + CoordElement(algebra, {b: c}).scale(algebra.counit(CoordElement(algebra, {a: QScalar(1)})))
            right = right + CoordElement(algebra, {a: c}).scale(algebra.counit(CoordElement(algebra, {b: QScalar(1)})))
        report.check(f"counit-left/{name}", left == t)
        report.check(f"counit-right/{name}", right == t)

        expected = unit.scale(algebra.counit(t))
        s_left = algebra.zero()
        s_right = algebra.zero()
        for (a, b), c in delta.terms():
            ta, tb = CoordElement(algebra, {a: c}), CoordElement(algebra, {b: QScalar(1)})
            s_left = s_left + algebra.multiply(algebra.antipode(ta), tb)
            s_right = s_right + algebra.multiply(ta, algebra.antipode(tb))
        report.check(f"antipode-left/{name}", s_left == expected, None if s_left == expected else {"got": str(s_left)})
        report.check(f"antipode-right/{name}", s_right == expected, None if s_right == expected else {"got": str(s_right)})

        report.check(f"star-involutive/{name}", algebra.star(algebra.star(t)) == t)

        for x in xs:
            for y in xs:
                lhs = algebra.left_action(x, algebra.right_action(y, t))
                rhs = algebra.right_action(y, algebra.left_action(x, t))
                if not lhs == rhs:
                    report.check(f"actions-commute/{name}/{x}/{y}", False, {"element": name})
        report.check(f"actions-commute/{name}", True)

    names = sorted(samples)
    for n1 in names:
        for n2 in names:
            a, b = samples[n1], samples[n2]
            ab = algebra.multiply(a, b)
            lhs = algebra.star(ab)
            rhs = algebra.multiply(algebra.star(b), algebra.star(a))
            report.check(f"star-antimultiplicative/{n1}*{n2}", lhs == rhs)

            for x in xs:
                lhs = algebra.right_action(x, ab)
                rhs = algebra.zero()
                for x1, x2 in x.coproduct():
                    rhs = rhs + algebra.multiply(algebra.right_action(x1, a), algebra.right_action(x2, b))
                report.check(f"right-equivariance/{x}/{n1}*{n2}", lhs == rhs)
    return report


def verify_su2_relations(algebra: CoordAlgebra) -> Report:
    """The five quantum SU(2) relations, derived by Clebsch-Gordan contraction."""
    report = Report("su2-relations", {"placement": algebra.placement, "cutoff": algebra.cutoff})
    gens = algebra.generators()
    alpha, beta = gens["alpha"], gens["beta"]
    alpha_s, beta_s = alpha.star(), beta.star()
    q = QScalar.s_power(2)
    unit = algebra.unit()

    def rel(name: str, lhs: CoordElement, rhs: CoordElement) -> None:
        ok = lhs == rhs
        report.check(name, ok, None if ok else {"lhs": str(lhs), "rhs": str(rhs)})

    rel("beta*alpha=q*alpha*beta", beta * alpha, (alpha * beta).scale(q))
    rel("beta^**alpha=q*alpha*beta^*", beta_s * alpha, (alpha * beta_s).scale(q))
    rel("beta*beta^*=beta^**beta", beta * beta_s, beta_s * beta)
    rel("alpha*alpha^*+beta*beta^*=1", alpha * alpha_s + beta * beta_s, unit)
    rel("alpha^**alpha+q^2*beta^**beta=1", alpha_s * alpha + (beta_s * beta).scale(q * q), unit)
    return report


def audit_product_placement(cutoff: int = 2) -> Tuple[str, Dict[str, bool]]:
    """Select the placement that reproduces the SU(2) relations verbatim.

    Returns the selected placement together with the outcome per placement.
    """
    outcome = {}
    for placement in PLACEMENTS:
        algebra = CoordAlgebra("su2", cutoff, placement, persist=False)
        outcome[placement] = verify_su2_relations(algebra).passed
    selected = [p for p in PLACEMENTS if outcome[p]]
    chosen = selected[0] if selected else PRODUCT_PLACEMENT
    _log.info("product placement audit: %s", outcome)
    return chosen, outcome


def _su3_family_instances() -> List[Tuple[str, Tuple[int, int], Tuple[int, int], str, Optional[Tuple[Tuple[int, int], Tuple[int, int]]]]]:
    """All instances of the four SU(3) relation families as index data.

    Each entry is ``(family, x, y, kind, extra)`` encoding ``x y = q y x``
    (``kind="q"``), ``x y = y x`` (``"commute"``) or
    ``x y - y x = (q - q^-1) extra_0 extra_1`` (``"commutator"``), with 1-based
    index pairs.
    """
    r = (1, 2, 3)
    out = []
    for i in r:
        for j in r:
            for k in r:
                if j < k:
                    out.append(("F1", (i, j), (i, k), "q", None))
    for i in r:
        for j in r:
            for k in r:
                if i < j:
                    out.append(("F2", (i, k), (j, k), "q", None))
    for i in r:
        for j in r:
            for k in r:
                for l in r:
                    if i < k and j > l:
                        out.append(("F3", (i, j), (k, l), "commute", None))
    for i in r:
        for j in r:
            for k in r:
                for l in r:
                    if i < k and j < l:
                        out.append(("F4", (i, j), (k, l), "commutator", ((i, l), (k, j))))
    return out


def _family_holds(algebra: CoordAlgebra, instance, orientation: str) -> bool:
    gens = algebra.generators()
    q = QScalar.s_power(2)

    def t(pair: Tuple[int, int]) -> CoordElement:
        return gens[f"t{pair[0]}{pair[1]}"]

    def mul(a: CoordElement, b: CoordElement) -> CoordElement:
        return a * b if orientation == "standard" else b * a

    _, x, y, kind, extra = instance
    lhs = mul(t(x), t(y))
    if kind == "q":
        return lhs == mul(t(y), t(x)).scale(q)
    if kind == "commute":
        return lhs == mul(t(y), t(x))
    return lhs - mul(t(y), t(x)) == mul(t(extra[0]), t(extra[1])).scale(q - q.inv())


def su3_relation_orientation_audit(algebra: CoordAlgebra) -> Dict[str, Dict[str, int]]:
    """Count, per family and product orientation, how many instances hold verbatim."""
    counts: Dict[str, Dict[str, int]] = {o: {} for o in ORIENTATIONS}
    for instance in _su3_family_instances():
        family = instance[0]
        for orientation in counts:
            held = _family_holds(algebra, instance, orientation)
            counts[orientation][family] = counts[orientation].get(family, 0) + int(held)
    return counts


def _unit_relation(algebra: CoordAlgebra, orientation: str) -> bool:
    gens = algebra.generators()
    q = QScalar.s_power(2)
    total = algebra.zero()
    for col, power in ((3, 0), (2, -4), (1, -8)):
        t = gens[f"t3{col}"]
        product = t.star() * t if orientation == "standard" else t * t.star()
        total = total + product.scale(QScalar.s_power(power))
    return total == algebra.unit()


def verify_su3_relations(algebra: Optional[CoordAlgebra] = None) -> Report:
    """The four SU(3) relation families and the unit relation under one frozen convention.

    The product orientation is frozen to the one of the audited placement,
    the orientation in which the SU(2) relations hold verbatim. Every family
    instance and the unit relation are checked in that orientation only. The
    orientation audit of each family is recorded next to it, and the
    ``single-convention`` check fails when the families and the unit relation
    hold in different orientations.
    """
    algebra = algebra or CoordAlgebra("su3", 2)
    orientation = "standard"
    report = Report(
        "su3-relations",
        {"placement": algebra.placement, "cutoff": algebra.cutoff, "orientation": orientation},
    )
    instances = _su3_family_instances()
    counts = su3_relation_orientation_audit(algebra)
    total = len(instances)
    complete = [o for o, per in counts.items() if sum(per.values()) == total]
    family_orientation = complete[0] if complete else None

    per_family: Dict[str, int] = {}
    for instance in instances:
        family, x, y, _, _ = instance
        held = _family_holds(algebra, instance, orientation)
        per_family[family] = per_family.get(family, 0) + 1
        witness = None
        if not held:
            others = [o for o in ORIENTATIONS if o != orientation and _family_holds(algebra, instance, o)]
            witness = {"orientation": orientation, "holds_in": others}
        report.check(f"{family}/t{x[0]}{x[1]},t{y[0]}{y[1]}", held, witness)

    unit_held = _unit_relation(algebra, orientation)
    unit_orientations = [o for o in ORIENTATIONS if _unit_relation(algebra, o)]
    report.check(
        "unit-relation",
        unit_held,
        None if unit_held else {"orientation": orientation, "holds_in": unit_orientations},
    )

    consistent = family_orientation is not None and family_orientation in unit_orientations
    report.check(
        "single-convention",
        consistent,
        None if consistent else {"families": family_orientation, "unit_relation": unit_orientations},
        counts=counts,
    )

    report.config["family_orientation"] = family_orientation
    report.config["unit_relation_orientations"] = unit_orientations
    report.config["family_counts"] = per_family
    if not consistent:
        message = (
            f"relation families hold in the {family_orientation} orientation and the unit relation "
            f"in {unit_orientations}; no single product convention satisfies both"
        )
        report.note(message)
        _log.warning(message)
    return report

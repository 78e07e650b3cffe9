from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Sequence, Tuple, TYPE_CHECKING
from collections import Counter
from fractions import Fraction
from functools import lru_cache

import logging

import numpy as np

from .errors import NotASummand, RepresentationError, RootDatumMismatch, UnknownRepresentation
from .linalg import EchelonBasis, Matrix, Vector, gram_schmidt, inner, nullspace, vec_add, vec_scale
from .report import Report
from .scalars import QScalar, q_binom, q_int

if TYPE_CHECKING:
    from .types.rep import RepPayload

__all__ = (
    "Weight",
    "Word",
    "RootDatum",
    "A1",
    "A2",
    "root_datum",
    "Rep",
    "CGEmbedding",
    "builtin_rep",
    "verify_defining_relations",
    "tensor",
    "dual",
    "highest_weight_vectors",
    "decompose",
    "canonical_irrep",
    "canonical_words",
    "intertwiner",
    "tensor_decomposition",
    "clebsch_gordan",
    "classical_matrices",
    "is_dominant",
)

_log = logging.getLogger(__name__)

Weight = Tuple[int, ...]
# generator word: ("e" | "f" | "k" | "kinv", index), leftmost factor first
Word = Tuple[Tuple[str, int], ...]


class RootDatum:
    """Cartan data of a simple Lie algebra of rank ``n``.

    Attributes
    ----------
    name: :class:`str`
        ``"A1"`` or ``"A2"``.
    cartan: Tuple[Tuple[:class:`int`, ...], ...]
        The Cartan matrix ``a_ij = alpha_j(h_i)``.
    symmetrizers: Tuple[:class:`int`, ...]
        Coprime positive ``d_i`` with ``d_i a_ij`` symmetric.
    """

    __slots__ = ("name", "cartan", "symmetrizers")

    def __init__(self, name: str, cartan: Sequence[Sequence[int]], symmetrizers: Sequence[int]) -> None:
        self.name = name
        self.cartan = tuple(tuple(row) for row in cartan)
        self.symmetrizers = tuple(symmetrizers)

        n = len(self.cartan)
        for i in range(n):
            if self.cartan[i][i] != 2:
                raise RepresentationError(f"{name}: diagonal Cartan entry {i} is not 2")
            for j in range(n):
                if i != j and self.cartan[i][j] > 0:
                    raise RepresentationError(f"{name}: positive off-diagonal Cartan entry")
                if self.pairing(i, j) != self.pairing(j, i):
                    raise RepresentationError(f"{name}: symmetrized Cartan matrix is not symmetric")

    @property
    def rank(self) -> int:
        return len(self.cartan)

    @property
    def group(self) -> str:
        return f"su{self.rank + 1}"

    def pairing(self, i: int, j: int) -> int:
        """The bilinear form ``(alpha_i, alpha_j) = d_i a_ij``."""
        return self.symmetrizers[i] * self.cartan[i][j]

    def simple_root(self, j: int) -> Weight:
        return tuple(self.cartan[i][j] for i in range(self.rank))

    def fundamental_weights(self) -> List[Weight]:
        return [tuple(int(i == j) for i in range(self.rank)) for j in range(self.rank)]

    def dual_weight(self, weight: Weight) -> Weight:
        """Highest weight of the dual module."""
        if self.rank == 2:
            return (weight[1], weight[0])
        return tuple(weight)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RootDatum) and other.name == self.name

    def __hash__(self) -> int:
        return hash(self.name)

    def __repr__(self) -> str:
        return f"<RootDatum name={self.name} rank={self.rank}>"


A1 = RootDatum("A1", ((2,),), (1,))
A2 = RootDatum("A2", ((2, -1), (-1, 2)), (1, 1))

_ROOT_DATA = {"A1": A1, "su2": A1, "A2": A2, "su3": A2}


def root_datum(name: str) -> RootDatum:
    try:
        return _ROOT_DATA[name]
    except KeyError:
        raise UnknownRepresentation(f"unknown group {name!r}; expected su2 or su3") from None


def is_dominant(weight: Sequence[int]) -> bool:
    return all(c >= 0 for c in weight)


def _sub(a: Weight, b: Weight) -> Weight:
    return tuple(x - y for x, y in zip(a, b))


def _add(a: Weight, b: Weight) -> Weight:
    return tuple(x + y for x, y in zip(a, b))


class Rep:
    """A finite-dimensional admissible module over the Drinfeld-Jimbo algebra.

    The ``k_i`` act diagonally by ``s**(d_i * mu(h_i))`` on a basis vector of
    weight ``mu``, and are derived from :attr:`weights`.

    Attributes
    ----------
    root_datum: :class:`RootDatum`
        The Cartan data.
    weights: Tuple[Tuple[:class:`int`, ...], ...]
        Weight of every basis vector.
    e: Tuple[:class:`Matrix`, ...]
        Matrices of the raising generators.
    f: Tuple[:class:`Matrix`, ...]
        Matrices of the lowering generators.
    k: Tuple[:class:`Matrix`, ...]
        Diagonal matrices of the Cartan generators.
    name: :class:`str`
        A label used in reports.
    """

    __slots__ = ("root_datum", "weights", "e", "f", "k", "kinv", "name")

    def __init__(
        self,
        root_datum: RootDatum,
        weights: Sequence[Sequence[int]],
        e: Sequence[Matrix],
        f: Sequence[Matrix],
        name: str = "module",
    ) -> None:
        self.root_datum = root_datum
        self.weights: Tuple[Weight, ...] = tuple(tuple(w) for w in weights)
        self.e = tuple(e)
        self.f = tuple(f)
        self.name = name

        n = root_datum.rank
        if len(self.e) != n or len(self.f) != n:
            raise RepresentationError(f"{name}: expected {n} raising and lowering matrices")
        d = root_datum.symmetrizers
        self.k = tuple(Matrix.diagonal([QScalar.s_power(d[i] * w[i]) for w in self.weights]) for i in range(n))
        self.kinv = tuple(Matrix.diagonal([QScalar.s_power(-d[i] * w[i]) for w in self.weights]) for i in range(n))

    @property
    def dimension(self) -> int:
        return len(self.weights)

    def generator(self, kind: str, i: int) -> Matrix:
        try:
            return getattr(self, kind)[i]
        except AttributeError:
            raise RepresentationError(f"unknown generator kind {kind!r}") from None

    def word_matrix(self, word: Word) -> Matrix:
        """Matrix of the product ``x_1 x_2 ... x_m`` of a generator word."""
        result = Matrix.identity(self.dimension)
        for kind, i in word:
            result = result @ self.generator(kind, i)
        return result

    def weight_spaces(self) -> Dict[Weight, List[int]]:
        spaces: Dict[Weight, List[int]] = {}
        for idx, w in enumerate(self.weights):
            spaces.setdefault(w, []).append(idx)
        return spaces

    def weight_multiset(self) -> Counter:
        return Counter(self.weights)

    def is_star(self) -> bool:
        """Whether ``e_i`` and ``f_i`` are adjoint in the standard inner product."""
        return all(self.e[i].adjoint() == self.f[i] for i in range(self.root_datum.rank))

    def with_matrices(self, e: Sequence[Matrix], f: Sequence[Matrix], name: Optional[str] = None) -> Rep:
        return Rep(self.root_datum, self.weights, e, f, name or self.name)

    def to_json(self) -> RepPayload:
        generators = {}
        for kind in ("e", "f"):
            for i, m in enumerate(getattr(self, kind)):
                generators[f"{kind}{i + 1}"] = [[r, c, v.to_json()] for r, c, v in m.entries()]
        return {
            "root_datum": self.root_datum.name,
            "dimension": self.dimension,
            "weights": [list(w) for w in self.weights],
            "generators": generators,
        }

    @classmethod
    def from_json(cls, payload: RepPayload, name: str = "module") -> Rep:
        rd = root_datum(payload["root_datum"])
        dim = payload["dimension"]
        mats: Dict[str, Matrix] = {}
        for key, entries in payload["generators"].items():
            mats[key] = Matrix(dim, dim, {(r, c): QScalar.from_json(v) for r, c, v in entries})
        e = [mats.get(f"e{i + 1}", Matrix.zeros(dim)) for i in range(rd.rank)]
        f = [mats.get(f"f{i + 1}", Matrix.zeros(dim)) for i in range(rd.rank)]
        return cls(rd, payload["weights"], e, f, name)

    def __repr__(self) -> str:
        return f"<Rep name={self.name!r} root_datum={self.root_datum.name} dimension={self.dimension}>"


class CGEmbedding:
    """An isometric intertwiner from the canonical irreducible into a module.

    Attributes
    ----------
    weight: Tuple[:class:`int`, ...]
        Highest weight ``kappa`` of the source.
    matrix: :class:`Matrix`
        ``dim(target) x dim(M_kappa)`` embedding matrix.
    copy: :class:`int`
        Index of this copy among summands of the same highest weight.
    left: Optional[Tuple[:class:`int`, ...]]
        First tensor factor highest weight, when the target is a tensor product.
    right: Optional[Tuple[:class:`int`, ...]]
        Second tensor factor highest weight.
    """

    __slots__ = ("weight", "matrix", "copy", "left", "right")

    def __init__(
        self,
        weight: Weight,
        matrix: Matrix,
        copy: int = 0,
        left: Optional[Weight] = None,
        right: Optional[Weight] = None,
    ) -> None:
        self.weight = weight
        self.matrix = matrix
        self.copy = copy
        self.left = left
        self.right = right

    @property
    def dimension(self) -> int:
        return self.matrix.cols

    def verify(self, target: Rep) -> Report:
        source = canonical_irrep(target.root_datum, self.weight)
        report = Report("cg-embedding", {"weight": self.weight, "target": target.name})
        E = self.matrix
        report.check("isometry", E.adjoint() @ E == Matrix.identity(E.cols))
        for i in range(target.root_datum.rank):
            for kind in ("e", "f", "k"):
                lhs = target.generator(kind, i) @ E
                rhs = E @ source.generator(kind, i)
                report.check(f"intertwines-{kind}{i + 1}", lhs == rhs)
        return report

    def __repr__(self) -> str:
        return f"<CGEmbedding weight={self.weight} copy={self.copy} dimension={self.dimension}>"


def _first_difference(a: Matrix, b: Matrix) -> Optional[Dict[str, object]]:
    diff = a - b
    for i, j, v in diff.entries():
        return {"row": i, "col": j, "lhs": a[i, j], "rhs": b[i, j]}
    return None


def _mpow(m: Matrix, n: int) -> Matrix:
    result = Matrix.identity(m.rows)
    for _ in range(n):
        result = result @ m
    return result


def _sqrt_q_int(n: int) -> QScalar:
    return q_int(n).sqrt()


def _su2_module(n: int) -> Rep:
    """Spin ``n/2`` module on ``v_0, ..., v_n`` with ``v_0`` highest."""
    if n < 0:
        raise UnknownRepresentation(f"su2 label must be non-negative, not {n}")
    dim = n + 1
    f_entries = {}
    for a in range(n):
        f_entries[(a + 1, a)] = (q_int(a + 1) * q_int(n - a)).sqrt()
    f = Matrix(dim, dim, f_entries)
    weights = [(n - 2 * a,) for a in range(dim)]
    return Rep(A1, weights, [f.transpose()], [f], f"su2:{n}")


def _su3_fundamental() -> Rep:
    e1 = Matrix(3, 3, {(0, 1): 1})
    e2 = Matrix(3, 3, {(1, 2): 1})
    weights = [(1, 0), (-1, 1), (0, -1)]
    return Rep(A2, weights, [e1, e2], [e1.T, e2.T], "su3:λ1")


def _su3_antifundamental() -> Rep:
    e1 = Matrix(3, 3, {(1, 0): 1})
    e2 = Matrix(3, 3, {(2, 1): 1})
    weights = [(-1, 0), (1, -1), (0, 1)]
    return Rep(A2, weights, [e1, e2], [e1.T, e2.T], "su3:λ1v")


def _su3_symmetric() -> Rep:
    r2 = _sqrt_q_int(2)
    e1 = Matrix(6, 6, {(0, 1): r2, (1, 2): r2, (3, 4): 1})
    e2 = Matrix(6, 6, {(1, 3): 1, (2, 4): r2, (4, 5): r2})
    weights = [(2, 0), (0, 1), (-2, 2), (1, -1), (-1, 0), (0, -2)]
    return Rep(A2, weights, [e1, e2], [e1.T, e2.T], "su3:λ2")


def _trivial(rd: RootDatum) -> Rep:
    zero = Matrix.zeros(1)
    return Rep(rd, [(0,) * rd.rank], [zero] * rd.rank, [zero] * rd.rank, f"{rd.group}:trivial")


_SU3_ALIASES = {
    "λ1": _su3_fundamental,
    "l1": _su3_fundamental,
    "lambda1": _su3_fundamental,
    "λ1v": _su3_antifundamental,
    "l1v": _su3_antifundamental,
    "lambda1v": _su3_antifundamental,
    "λ2": _su3_symmetric,
    "l2": _su3_symmetric,
    "lambda2": _su3_symmetric,
}


def builtin_rep(name: str) -> Rep:
    """Look up a built-in module.

    Parameters
    ----------
    name: :class:`str`
        ``"su2:<n>"`` for the module of highest weight ``n`` (so ``su2:1`` is
        spin one half; ``su2:1/2`` is accepted too), ``"su3:λ1"``,
        ``"su3:λ1v"``, ``"su3:λ2"`` (ASCII spellings ``l1``, ``l1v``, ``l2``
        work), and ``"trivial"``, ``"su2:trivial"`` or ``"su3:trivial"``.

    Raises
    ------
    UnknownRepresentation
        The name is not recognised.
    """
    group, _, label = name.partition(":")
    if not label:
        if group == "trivial":
            return _trivial(A1)
        raise UnknownRepresentation(f"unknown module {name!r}")
    if label == "trivial":
        return _trivial(root_datum(group))
    if group == "su2":
        try:
            value = Fraction(label)
        except ValueError:
            raise UnknownRepresentation(f"unknown su2 module {name!r}") from None
        if "/" in label:
            value *= 2
        if value.denominator != 1:
            raise UnknownRepresentation(f"su2 highest weight must be a half-integer, not {label}")
        return _su2_module(int(value))
    if group == "su3" and label in _SU3_ALIASES:
        return _SU3_ALIASES[label]()
    raise UnknownRepresentation(f"unknown module {name!r}")


def verify_defining_relations(rep: Rep) -> Report:
    """Check every defining relation as an exact matrix identity.

    Covered relations are commutativity of the ``k_i``, the ``k``-conjugation
    scalings of ``e_j`` and ``f_j``, the commutators ``[e_i, f_j]`` and both
    quantum Serre relations.
    """
    rd = rep.root_datum
    report = Report("uq-relations", {"module": rep.name})
    n = rd.rank
    for i in range(n):
        qi = QScalar.s_power(2 * rd.symmetrizers[i])
        for j in range(n):
            lhs, rhs = rep.k[i] @ rep.k[j], rep.k[j] @ rep.k[i]
            report.check(f"k{i + 1}k{j + 1}-commute", lhs == rhs, _first_difference(lhs, rhs))

            lhs = rep.k[i] @ rep.e[j] @ rep.kinv[i]
            rhs = rep.e[j].scale(QScalar.s_power(rd.pairing(i, j)))
            report.check(f"k{i + 1}e{j + 1}k{i + 1}^-1", lhs == rhs, _first_difference(lhs, rhs))

            lhs = rep.k[i] @ rep.f[j] @ rep.kinv[i]
            rhs = rep.f[j].scale(QScalar.s_power(-rd.pairing(i, j)))
            report.check(f"k{i + 1}f{j + 1}k{i + 1}^-1", lhs == rhs, _first_difference(lhs, rhs))

            lhs = rep.e[i].commutator(rep.f[j])
            if i == j:
                k2 = rep.k[i] @ rep.k[i]
                km2 = rep.kinv[i] @ rep.kinv[i]
                rhs = (k2 - km2).scale((qi - qi.inv()).inv())
            else:
                rhs = Matrix.zeros(rep.dimension)
            report.check(f"[e{i + 1},f{j + 1}]", lhs == rhs, _first_difference(lhs, rhs))

            if i == j:
                continue
            m = 1 - rd.cartan[i][j]
            d = rd.symmetrizers[i]
            for kind in ("e", "f"):
                xi, xj = rep.generator(kind, i), rep.generator(kind, j)
                total = Matrix.zeros(rep.dimension)
                for r in range(m + 1):
                    term = _mpow(xi, m - r) @ xj @ _mpow(xi, r)
                    coeff = q_binom(m, r, d) * (-1) ** r
                    total = total + term.scale(coeff)
                report.check(
                    f"serre-{kind}{i + 1}{j + 1}",
                    total.is_zero(),
                    _first_difference(total, Matrix.zeros(rep.dimension)),
                )
    return report


def tensor(r1: Rep, r2: Rep) -> Rep:
    """Tensor product through the coproduct ``e -> e (x) k + k^-1 (x) e``."""
    if r1.root_datum != r2.root_datum:
        raise RootDatumMismatch(f"cannot tensor {r1.root_datum.name} with {r2.root_datum.name}")
    n = r1.root_datum.rank
    e = [r1.e[i].kron(r2.k[i]) + r1.kinv[i].kron(r2.e[i]) for i in range(n)]
    f = [r1.f[i].kron(r2.k[i]) + r1.kinv[i].kron(r2.f[i]) for i in range(n)]
    weights = [_add(a, b) for a in r1.weights for b in r2.weights]
    return Rep(r1.root_datum, weights, e, f, f"({r1.name})⊗({r2.name})")


def dual(r: Rep) -> Rep:
    """Dual module acting by ``rho(S(x))`` transposed, on negated weights."""
    rd = r.root_datum
    e, f = [], []
    for i in range(rd.rank):
        qi = QScalar.s_power(2 * rd.symmetrizers[i])
        e.append(r.e[i].transpose().scale(-qi))
        f.append(r.f[i].transpose().scale(-qi.inv()))
    weights = [tuple(-c for c in w) for w in r.weights]
    return Rep(rd, weights, e, f, f"({r.name})*")


def highest_weight_vectors(r: Rep) -> List[Tuple[Weight, Vector]]:
    """Basis of the joint kernel of the ``e_i``, weight space by weight space.

    Weights come in descending lexicographic order.
    """
    out: List[Tuple[Weight, Vector]] = []
    n = r.root_datum.rank
    dim = r.dimension
    for weight, cols in sorted(r.weight_spaces().items(), reverse=True):
        position = {c: idx for idx, c in enumerate(cols)}
        entries = {}
        for i in range(n):
            for row, col, v in r.e[i].entries():
                if col in position:
                    entries[(i * dim + row, position[col])] = v
        kernel = nullspace(Matrix(n * dim, len(cols), entries))
        for v in kernel:
            out.append((weight, {cols[idx]: x for idx, x in v.items()}))
    return out


def _apply_f_words(r: Rep, u: Vector, words: Iterable[Tuple[int, ...]]) -> Dict[Tuple[int, ...], Vector]:
    cache: Dict[Tuple[int, ...], Vector] = {(): u}
    for word in sorted(set(words), key=len):
        if word in cache:
            continue
        prefix = word[:-1]
        if prefix not in cache:
            cache.update(_apply_f_words(r, u, [prefix]))
        cache[word] = r.f[word[-1]].apply(cache[prefix])
    return cache


def _combine(r: Rep, u: Vector, expansion: Sequence[Tuple[QScalar, Tuple[int, ...]]], vectors=None) -> Vector:
    if vectors is None:
        vectors = _apply_f_words(r, u, [w for _, w in expansion])
    out: Vector = {}
    for c, word in expansion:
        out = vec_add(out, vectors[word], c)
    return out


def _seed(rd: RootDatum, weight: Weight) -> Tuple[Rep, int]:
    if rd.rank == 1:
        return _su2_module(weight[0]), 0
    if weight == (1, 0):
        return _su3_fundamental(), 0
    if weight == (0, 1):
        return _su3_antifundamental(), 2
    a, b = weight
    if a >= 1:
        return tensor(canonical_irrep(rd, (a - 1, b)), canonical_irrep(rd, (1, 0))), 0
    return tensor(canonical_irrep(rd, (0, b - 1)), canonical_irrep(rd, (0, 1))), 0


@lru_cache(maxsize=None)
def _canonical(rd_name: str, weight: Weight):
    rd = root_datum(rd_name)
    if not is_dominant(weight) or len(weight) != rd.rank:
        raise RepresentationError(f"{weight} is not a dominant weight of {rd_name}")
    if not any(weight):
        return _trivial(rd), (((QScalar(1), ()),),)

    seed, hw = _seed(rd, weight)
    u: Vector = {hw: QScalar(1)}
    n = rd.rank

    accepted: List[Tuple[Tuple[int, ...], Vector, Weight]] = [((), u, weight)]
    spaces: Dict[Weight, EchelonBasis] = {weight: EchelonBasis()}
    spaces[weight].add(u)
    pointer = 0
    while pointer < len(accepted):
        word, v, wt = accepted[pointer]
        pointer += 1
        for i in range(n):
            w = seed.f[i].apply(v)
            if not w:
                continue
            new_wt = _sub(wt, rd.simple_root(i))
            if spaces.setdefault(new_wt, EchelonBasis()).add(w):
                accepted.append((word + (i,), w, new_wt))

    # unnormalized Gram-Schmidt per weight space, tracking word expansions
    ortho: List[Vector] = []
    norms: List[QScalar] = []
    raw: List[Dict[Tuple[int, ...], QScalar]] = []
    for idx, (word, v, wt) in enumerate(accepted):
        w = dict(v)
        expansion: Dict[Tuple[int, ...], QScalar] = {word: QScalar(1)}
        for j in range(idx):
            if accepted[j][2] != wt:
                continue
            c = inner(ortho[j], w)
            if not c:
                continue
            factor = c / norms[j]
            w = vec_add(w, ortho[j], -factor)
            for wj, cj in raw[j].items():
                expansion[wj] = expansion.get(wj, QScalar()) - factor * cj
        ortho.append(w)
        norms.append(inner(w, w))
        raw.append({k: c for k, c in expansion.items() if c})

    basis: List[Vector] = []
    words = []
    for w, nrm, expansion in zip(ortho, norms, raw):
        scale = nrm.sqrt().inv()
        basis.append(vec_scale(w, scale))
        words.append(tuple((scale * c, word) for word, c in sorted(expansion.items(), key=lambda kv: (len(kv[0]), kv[0]))))

    weights = [wt for _, _, wt in accepted]
    dim = len(basis)
    index_by_weight: Dict[Weight, List[int]] = {}
    for idx, wt in enumerate(weights):
        index_by_weight.setdefault(wt, []).append(idx)

    e_mats, f_mats = [], []
    for i in range(n):
        root = rd.simple_root(i)
        for kind, target_shift, store in (("e", 1, e_mats), ("f", -1, f_mats)):
            entries = {}
            for col, b in enumerate(basis):
                image = seed.generator(kind, i).apply(b)
                if not image:
                    continue
                target = tuple(x + target_shift * y for x, y in zip(weights[col], root))
                for row in index_by_weight.get(target, []):
                    c = inner(basis[row], image)
                    if c:
                        entries[(row, col)] = c
            store.append(Matrix(dim, dim, entries))

    label = ",".join(str(c) for c in weight)
    rep = Rep(rd, weights, e_mats, f_mats, f"{rd.group}:({label})")
    _log.debug("built canonical irreducible %s of dimension %d", rep.name, dim)
    return rep, tuple(words)


def canonical_irrep(rd: RootDatum, weight: Sequence[int]) -> Rep:
    """The canonical irreducible module ``M_kappa`` with orthonormal weight basis.

    Its basis is generated from the highest-weight vector by lowering words
    ``f_{i_m} ... f_{i_1}``, breadth first with ``f_1`` before ``f_2``,
    keeping vectors independent within their weight space, then
    orthonormalized by Gram-Schmidt in that order.
    """
    return _canonical(rd.name, tuple(weight))[0]


def canonical_words(rd: RootDatum, weight: Sequence[int]) -> Tuple[Tuple[Tuple[QScalar, Tuple[int, ...]], ...], ...]:
    """Expansion of every canonical basis vector as a combination of lowering words."""
    return _canonical(rd.name, tuple(weight))[1]


def intertwiner(target: Rep, weight: Sequence[int], highest: Vector) -> Matrix:
    """Intertwiner from ``M_kappa`` into ``target`` sending the top vector to ``highest``.

    Columns are the images of the canonical basis; no normalization is applied.
    """
    rd = target.root_datum
    expansions = canonical_words(rd, weight)
    vectors = _apply_f_words(target, highest, [w for exp in expansions for _, w in exp])
    columns = [_combine(target, highest, exp, vectors) for exp in expansions]
    return Matrix.from_columns(target.dimension, columns)


def _scale_first(v: Vector) -> Vector:
    return vec_scale(v, v[min(v)].inv())


def decompose(r: Rep, left: Optional[Weight] = None, right: Optional[Weight] = None) -> List[CGEmbedding]:
    """Split a star module into isometrically embedded canonical irreducibles.

    Each highest-weight vector is scaled so its first nonzero coordinate is
    ``1``, normalized, and pushed through the lowering words of the canonical
    irreducible. Blocks come in descending lexicographic order of weight.
    """
    by_weight: Dict[Weight, List[Vector]] = {}
    for weight, v in highest_weight_vectors(r):
        by_weight.setdefault(weight, []).append(v)

    out: List[CGEmbedding] = []
    for weight in sorted(by_weight, reverse=True):
        vectors = by_weight[weight]
        if len(vectors) > 1:
            vectors = gram_schmidt(vectors)
        for copy, v in enumerate(vectors):
            v = _scale_first(v)
            u = vec_scale(v, inner(v, v).sqrt().inv())
            matrix = intertwiner(r, weight, u)
            out.append(CGEmbedding(weight, matrix, copy, left, right))

    total = sum(e.dimension for e in out)
    if total != r.dimension:
        raise RepresentationError(f"decomposition of {r.name} covers {total} of {r.dimension} dimensions")
    return out


@lru_cache(maxsize=None)
def _tensor_decomposition(rd_name: str, left: Weight, right: Weight) -> Tuple[CGEmbedding, ...]:
    rd = root_datum(rd_name)
    product = tensor(canonical_irrep(rd, left), canonical_irrep(rd, right))
    return tuple(decompose(product, left, right))


def tensor_decomposition(rd: RootDatum, left: Sequence[int], right: Sequence[int]) -> Tuple[CGEmbedding, ...]:
    return _tensor_decomposition(rd.name, tuple(left), tuple(right))


def clebsch_gordan(
    left: Sequence[int],
    right: Sequence[int],
    summand: Sequence[int],
    m: int,
    m_prime: int,
    k: int,
    *,
    copy: int = 0,
) -> QScalar:
    """One Clebsch-Gordan coefficient with 1-based basis labels.

    Returns the coefficient of ``v_m (x) w_m'`` in the ``k``-th basis vector of
    the summand ``M_kappa`` of ``M_left (x) M_right``.

    Raises
    ------
    NotASummand
        ``summand`` does not occur (``copy`` times) in the tensor product.
    """
    rd = A1 if len(left) == 1 else A2
    blocks = [b for b in tensor_decomposition(rd, left, right) if b.weight == tuple(summand) and b.copy == copy]
    if not blocks:
        raise NotASummand(f"{tuple(summand)} is not a summand of {tuple(left)} ⊗ {tuple(right)}")
    block = blocks[0]
    dim_right = canonical_irrep(rd, right).dimension
    return block.matrix[(m - 1) * dim_right + (m_prime - 1), k - 1]


def classical_matrices(rep: Rep) -> Dict[str, List[np.ndarray]]:
    """Numeric generator matrices at ``s = 1`` plus the Cartan diagonals."""
    n = rep.root_datum.rank
    return {
        "e": [rep.e[i].classical().real for i in range(n)],
        "f": [rep.f[i].classical().real for i in range(n)],
        "h": [np.diag([float(w[i]) for w in rep.weights]) for i in range(n)],
    }

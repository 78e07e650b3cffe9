from __future__ import annotations

from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import logging

import numpy as np

from .errors import ScalarDivisionError
from .scalars import QScalar, Scalarish, classical_limit, eval_numeric

__all__ = (
    "Vector",
    "Matrix",
    "EchelonBasis",
    "vec_add",
    "vec_scale",
    "vec_conj",
    "inner",
    "row_reduce",
    "nullspace",
    "rank",
    "rank_of_vectors",
    "inverse",
    "gram_schmidt",
)

_log = logging.getLogger(__name__)

# sparse column vector: index -> nonzero entry
Vector = Dict[int, QScalar]


def _as_scalar(value: Scalarish) -> QScalar:
    return value if isinstance(value, QScalar) else QScalar(value)


def vec_add(u: Vector, v: Vector, factor: Scalarish = 1) -> Vector:
    """``u + factor * v`` without mutating either argument."""
    out = dict(u)
    factor = _as_scalar(factor)
    for i, x in v.items():
        value = out.get(i, QScalar()) + factor * x
        if value:
            out[i] = value
        else:
            out.pop(i, None)
    return out


def vec_scale(v: Vector, factor: Scalarish) -> Vector:
    factor = _as_scalar(factor)
    if not factor:
        return {}
    return {i: factor * x for i, x in v.items()}


def vec_conj(v: Vector) -> Vector:
    return {i: x.conj() for i, x in v.items()}


def inner(u: Vector, v: Vector) -> QScalar:
    """Standard inner product, conjugate-linear in the first slot."""
    total = QScalar()
    small, large = (u, v) if len(u) <= len(v) else (v, u)
    for i in small:
        if i in large:
            total = total + u[i].conj() * v[i]
    return total


class Matrix:
    """A sparse exact matrix over :class:`QScalar`.

    Only nonzero entries are stored. Matrices are immutable; every operation
    returns a new instance.

    Attributes
    ----------
    rows: :class:`int`
        Number of rows.
    cols: :class:`int`
        Number of columns.
    """

    __slots__ = ("rows", "cols", "_entries")

    __hash__ = None  # type: ignore

    def __init__(self, rows: int, cols: int, entries: Optional[Dict[Tuple[int, int], Scalarish]] = None) -> None:
        self.rows = rows
        self.cols = cols
        self._entries: Dict[Tuple[int, int], QScalar] = {}
        for (i, j), value in (entries or {}).items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise IndexError(f"entry ({i}, {j}) outside a {rows}x{cols} matrix")
            value = _as_scalar(value)
            if value:
                self._entries[(i, j)] = value

    @classmethod
    def zeros(cls, rows: int, cols: Optional[int] = None) -> Matrix:
        return cls(rows, rows if cols is None else cols)

    @classmethod
    def identity(cls, n: int) -> Matrix:
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def diagonal(cls, values: Sequence[Scalarish]) -> Matrix:
        n = len(values)
        return cls(n, n, {(i, i): v for i, v in enumerate(values)})

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Scalarish]]) -> Matrix:
        cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, {(i, j): v for i, row in enumerate(rows) for j, v in enumerate(row)})

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[Vector]) -> Matrix:
        return cls(rows, len(columns), {(i, j): v for j, col in enumerate(columns) for i, v in col.items()})

    def __getitem__(self, index: Tuple[int, int]) -> QScalar:
        value = self._entries.get(index)
        return QScalar() if value is None else value

    def entries(self) -> Iterator[Tuple[int, int, QScalar]]:
        for (i, j), value in sorted(self._entries.items(), key=lambda item: item[0]):
            yield i, j, value

    def nnz(self) -> int:
        return len(self._entries)

    def column(self, j: int) -> Vector:
        return {i: v for (i, jj), v in self._entries.items() if jj == j}

    def row(self, i: int) -> Vector:
        return {j: v for (ii, j), v in self._entries.items() if ii == i}

    def columns(self) -> List[Vector]:
        cols: List[Vector] = [{} for _ in range(self.cols)]
        for (i, j), v in self._entries.items():
            cols[j][i] = v
        return cols

    def row_dicts(self) -> List[Vector]:
        rows: List[Vector] = [{} for _ in range(self.rows)]
        for (i, j), v in self._entries.items():
            rows[i][j] = v
        return rows

    def map(self, fn: Callable[[QScalar], Scalarish]) -> Matrix:
        return Matrix(self.rows, self.cols, {k: fn(v) for k, v in self._entries.items()})

    def transpose(self) -> Matrix:
        return Matrix(self.cols, self.rows, {(j, i): v for (i, j), v in self._entries.items()})

    @property
    def T(self) -> Matrix:
        return self.transpose()

    def conj(self) -> Matrix:
        return self.map(QScalar.conj)

    def adjoint(self) -> Matrix:
        """Conjugate transpose."""
        return Matrix(self.cols, self.rows, {(j, i): v.conj() for (i, j), v in self._entries.items()})

    @property
    def H(self) -> Matrix:
        return self.adjoint()

    def _check_shape(self, other: Matrix) -> None:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError(f"shape mismatch: {self.rows}x{self.cols} and {other.rows}x{other.cols}")

    def __add__(self, other: Matrix) -> Matrix:
        if not isinstance(other, Matrix):
            return NotImplemented
        self._check_shape(other)
        entries = dict(self._entries)
        for k, v in other._entries.items():
            entries[k] = entries[k] + v if k in entries else v
        return Matrix(self.rows, self.cols, entries)

    def __neg__(self) -> Matrix:
        return self.map(lambda v: -v)

    def __sub__(self, other: Matrix) -> Matrix:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self + (-other)

    def scale(self, factor: Scalarish) -> Matrix:
        factor = _as_scalar(factor)
        return self.map(lambda v: factor * v)

    def __mul__(self, other: Union[Matrix, Scalarish]) -> Matrix:
        if isinstance(other, Matrix):
            return self @ other
        if isinstance(other, (QScalar, int)) or hasattr(other, "denominator"):
            return self.scale(other)  # type: ignore
        return NotImplemented

    def __rmul__(self, other: Scalarish) -> Matrix:
        return self.scale(other)

    def __matmul__(self, other: Matrix) -> Matrix:
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        other_rows = other.row_dicts()
        acc: Dict[Tuple[int, int], QScalar] = {}
        for (i, k), a in self._entries.items():
            for j, b in other_rows[k].items():
                key = (i, j)
                acc[key] = acc[key] + a * b if key in acc else a * b
        return Matrix(self.rows, other.cols, acc)

    def apply(self, v: Vector) -> Vector:
        out: Vector = {}
        for (i, j), a in self._entries.items():
            if j in v:
                value = out.get(i, QScalar()) + a * v[j]
                if value:
                    out[i] = value
                else:
                    out.pop(i, None)
        return out

    def kron(self, other: Matrix) -> Matrix:
        """Kronecker product with flat index ``a * other.rows + b``."""
        entries = {}
        for (i, j), a in self._entries.items():
            for (k, l), b in other._entries.items():
                entries[(i * other.rows + k, j * other.cols + l)] = a * b
        return Matrix(self.rows * other.rows, self.cols * other.cols, entries)

    def commutator(self, other: Matrix) -> Matrix:
        return self @ other - other @ self

    def is_zero(self) -> bool:
        return not self._entries

    def is_diagonal(self) -> bool:
        return all(i == j for i, j in self._entries)

    def diagonal_entries(self) -> List[QScalar]:
        return [self[i, i] for i in range(min(self.rows, self.cols))]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        if (self.rows, self.cols) != (other.rows, other.cols):
            return False
        return (self - other).is_zero()

    def evaluate(self, q: float) -> np.ndarray:
        """Numeric matrix at the deformation parameter ``q``."""
        out = np.zeros((self.rows, self.cols), dtype=complex)
        for (i, j), v in self._entries.items():
            out[i, j] = eval_numeric(v, q)
        return out

    def classical(self) -> np.ndarray:
        """Numeric matrix at ``s = 1``."""
        out = np.zeros((self.rows, self.cols), dtype=complex)
        for (i, j), v in self._entries.items():
            out[i, j] = complex(classical_limit(v))
        return out

    def __repr__(self) -> str:
        return f"<Matrix rows={self.rows} cols={self.cols} nnz={len(self._entries)}>"


class EchelonBasis:
    """Incremental row-echelon basis of a subspace.

    :meth:`add` reduces a vector against the stored rows and keeps it when it
    is independent. The pivot is always the first nonzero coordinate.
    """

    __slots__ = ("_rows", "_pivots")

    def __init__(self) -> None:
        self._rows: Dict[int, Vector] = {}
        self._pivots: List[int] = []

    def __len__(self) -> int:
        return len(self._pivots)

    def reduce(self, v: Vector) -> Vector:
        v = dict(v)
        for p in self._pivots:
            c = v.get(p)
            if c:
                v = vec_add(v, self._rows[p], -c)
        return v

    def contains(self, v: Vector) -> bool:
        return not self.reduce(v)

    def add(self, v: Vector) -> bool:
        rest = self.reduce(v)
        if not rest:
            return False
        pivot = min(rest)
        self._rows[pivot] = vec_scale(rest, rest[pivot].inv())
        self._pivots.append(pivot)
        self._pivots.sort()
        return True


def row_reduce(m: Matrix) -> Tuple[List[Vector], List[int]]:
    """Reduced row-echelon form as sparse rows plus the pivot columns.

    The pivot of each step is the first nonzero entry, no numeric thresholds.
    """
    rows = [r for r in m.row_dicts() if r]
    reduced: List[Vector] = []
    pivots: List[int] = []
    for col in range(m.cols):
        found = None
        for idx, r in enumerate(rows):
            if r.get(col):
                found = idx
                break
        if found is None:
            continue
        pivot_row = rows.pop(found)
        pivot_row = vec_scale(pivot_row, pivot_row[col].inv())
        rows = [vec_add(r, pivot_row, -r[col]) if col in r else r for r in rows]
        rows = [r for r in rows if r]
        reduced = [vec_add(r, pivot_row, -r[col]) if col in r else r for r in reduced]
        reduced.append(pivot_row)
        pivots.append(col)
    return reduced, pivots


def nullspace(m: Matrix) -> List[Vector]:
    """Basis of the right kernel, one vector per free column."""
    reduced, pivots = row_reduce(m)
    pivot_set = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        v: Vector = {free: QScalar(1)}
        for r, p in zip(reduced, pivots):
            c = r.get(free)
            if c:
                v[p] = -c
        basis.append(v)
    return basis


def rank(m: Matrix) -> int:
    return len(row_reduce(m)[1])


def rank_of_vectors(vectors: Iterable[Vector]) -> int:
    basis = EchelonBasis()
    for v in vectors:
        basis.add(v)
    return len(basis)


def inverse(m: Matrix) -> Matrix:
    """Exact inverse by Gauss-Jordan elimination.

    Raises
    ------
    ScalarDivisionError
        The matrix is singular or not square.
    """
    n = m.rows
    if m.cols != n:
        raise ScalarDivisionError(f"cannot invert a {m.rows}x{m.cols} matrix")
    augmented = Matrix(n, 2 * n, {**m._entries, **{(i, n + i): QScalar(1) for i in range(n)}})
    reduced, pivots = row_reduce(augmented)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ScalarDivisionError("matrix is singular")
    entries = {}
    for i in range(n):
        for j, v in reduced[i].items():
            if j >= n:
                entries[(i, j - n)] = v
    return Matrix(n, n, entries)


def gram_schmidt(vectors: Sequence[Vector]) -> List[Vector]:
    """Unnormalized Gram-Schmidt in the given order; dependent vectors are dropped."""
    out: List[Vector] = []
    norms: List[QScalar] = []
    for v in vectors:
        w = dict(v)
        for u, n in zip(out, norms):
            c = inner(u, w)
            if c:
                w = vec_add(w, u, -(c / n))
        if w:
            out.append(w)
            norms.append(inner(w, w))
    return out

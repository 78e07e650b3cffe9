from __future__ import annotations

from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple, Union
from fractions import Fraction
from functools import lru_cache, reduce
from itertools import product as cartesian

import logging
import math

import numpy as np
import scipy.linalg

from .errors import NoChirality, RepresentationError, SpinError
from .orbifold import ActionSpec
from .repcat import Rep, Weight, canonical_irrep, classical_matrices, is_dominant, root_datum
from .report import Report

__all__ = (
    "LieAlgebraBasis",
    "SpinorModule",
    "DiracBlock",
    "joint_weights",
    "dirac_block",
    "spin_lift_check",
    "lift_twist_window",
    "lift_exponents",
    "central_offset",
)

_log = logging.getLogger(__name__)

_PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
_PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_ID2 = np.eye(2, dtype=complex)

# integer eigenvalues are read off within this distance
_ROUNDING = 1e-9


def _kron_all(factors: Sequence[np.ndarray]) -> np.ndarray:
    return reduce(np.kron, factors, np.eye(1, dtype=complex))


def _unit(n: int, i: int, j: int) -> np.ndarray:
    m = np.zeros((n, n), dtype=complex)
    m[i, j] = 1
    return m


class LieAlgebraBasis:
    """Orthonormal basis of the compact real form ``su(n)``.

    The basis is ``x_k = i lambda_k / (2 sqrt(n))`` for the generalized Gell-Mann
    matrices ``lambda_k``, so that ``(x_k, x_l) = -delta_kl`` for the Killing
    form ``(x, y) = 2n tr(xy)``. Off-diagonal pairs come first in
    lexicographic order, the diagonal elements last.

    Attributes
    ----------
    n: :class:`int`
        Size of the defining matrices.
    matrices: List[:class:`numpy.ndarray`]
        The basis elements as anti-Hermitian ``n x n`` matrices.
    cartan: List[:class:`numpy.ndarray`]
        The coroots ``h_j = E_jj - E_{j+1, j+1}`` of the complexification.
    """

    __slots__ = ("n", "matrices", "cartan")

    def __init__(self, n: int, matrices: Sequence[np.ndarray], cartan: Sequence[np.ndarray]) -> None:
        self.n = n
        self.matrices = list(matrices)
        self.cartan = list(cartan)

    @classmethod
    def su(cls, n: int) -> LieAlgebraBasis:
        if n < 2:
            raise SpinError(f"su({n}) is not a simple Lie algebra")
        gell_mann = []
        for i in range(n):
            for j in range(i + 1, n):
                gell_mann.append(_unit(n, i, j) + _unit(n, j, i))
                gell_mann.append(-1j * _unit(n, i, j) + 1j * _unit(n, j, i))
        for l in range(1, n):
            diag = np.zeros(n, dtype=complex)
            diag[:l] = 1
            diag[l] = -l
            gell_mann.append(np.diag(diag) * math.sqrt(2 / (l * (l + 1))))
        scale = 1j / (2 * math.sqrt(n))
        cartan = [_unit(n, j, j) - _unit(n, j + 1, j + 1) for j in range(n - 1)]
        return cls(n, [scale * m for m in gell_mann], cartan)

    @classmethod
    def for_group(cls, group: str) -> LieAlgebraBasis:
        return cls.su(root_datum(group).rank + 1)

    @property
    def dimension(self) -> int:
        return len(self.matrices)

    @property
    def rank(self) -> int:
        return self.n - 1

    def killing(self, a: np.ndarray, b: np.ndarray) -> complex:
        return 2 * self.n * np.trace(a @ b)

    def coordinates(self, y: np.ndarray) -> np.ndarray:
        """Coefficients of ``y`` in the basis; complex for the complexification."""
        return np.array([-self.killing(y, x) for x in self.matrices])

    def structure_constants(self) -> np.ndarray:
        """``c[k, l, m]``, the ``x_m`` coefficient of ``[x_k, x_l]``."""
        m = self.dimension
        out = np.zeros((m, m, m))
        for k, a in enumerate(self.matrices):
            for l, b in enumerate(self.matrices):
                out[k, l] = self.coordinates(a @ b - b @ a).real
        return out

    def killing_matrix(self) -> np.ndarray:
        """``tr(ad x_k ad x_l)`` computed from the structure constants."""
        c = self.structure_constants()
        # ad(x_k) has entries c[k, l, m] mapping x_l to x_m
        ad = [c[k].T for k in range(self.dimension)]
        return np.array([[np.trace(a @ b) for b in ad] for a in ad])

    def represent(self, rep: Rep, y: np.ndarray) -> np.ndarray:
        """Image of ``y`` under the classical limit of ``rep``."""
        if rep.root_datum.rank != self.rank:
            raise RepresentationError(f"{rep.name} is not a module of su({self.n})")
        units = _chevalley_units(rep)
        dim = rep.dimension
        out = np.zeros((dim, dim), dtype=complex)
        for (i, j), image in units.items():
            if y[i, j]:
                out += y[i, j] * image
        mats = classical_matrices(rep)
        cumulative = 0
        for j in range(self.rank):
            cumulative += y[j, j]
            out += cumulative * mats["h"][j]
        return out

    def __repr__(self) -> str:
        return f"<LieAlgebraBasis su({self.n}) dimension={self.dimension}>"


def _chevalley_units(rep: Rep) -> Dict[Tuple[int, int], np.ndarray]:
    """Images of the off-diagonal matrix units ``E_ij``, built by commutators."""
    mats = classical_matrices(rep)
    n = rep.root_datum.rank + 1
    units: Dict[Tuple[int, int], np.ndarray] = {}
    for i in range(n - 1):
        units[(i, i + 1)] = mats["e"][i].astype(complex)
        units[(i + 1, i)] = mats["f"][i].astype(complex)
    for d in range(2, n):
        for i in range(n - d):
            a, b = units[(i, i + d - 1)], units[(i + d - 1, i + d)]
            units[(i, i + d)] = a @ b - b @ a
            a, b = units[(i + d, i + d - 1)], units[(i + d - 1, i)]
            units[(i + d, i)] = a @ b - b @ a
    return units


def _gamma_matrices(m: int) -> List[np.ndarray]:
    """Anti-Hermitian ``gamma_k`` with ``gamma_k gamma_l + gamma_l gamma_k = -2 delta_kl``.

    Jordan-Wigner: ``Z ... Z X I ... I`` and ``Z ... Z Y I ... I`` per site, and
    the product ``Z ... Z`` as the extra generator when ``m`` is odd.
    """
    r = m // 2
    hermitian = []
    for site in range(r):
        head = [_PAULI_Z] * site
        tail = [_ID2] * (r - site - 1)
        hermitian.append(_kron_all(head + [_PAULI_X] + tail))
        hermitian.append(_kron_all(head + [_PAULI_Y] + tail))
    if m % 2:
        hermitian.append(_kron_all([_PAULI_Z] * r))
    return [1j * g for g in hermitian]


class SpinorModule:
    """The irreducible spinor module of ``cl(g)`` for ``g = su(n)``.

    Attributes
    ----------
    algebra: :class:`LieAlgebraBasis`
        The orthonormal basis the ``gammas`` are attached to.
    gammas: List[:class:`numpy.ndarray`]
        ``gamma(x_k)`` in the basis order of :attr:`algebra`.
    """

    __slots__ = ("algebra", "gammas", "_ad")

    def __init__(self, algebra: LieAlgebraBasis) -> None:
        self.algebra = algebra
        self.gammas = _gamma_matrices(algebra.dimension)
        self._ad: Optional[List[np.ndarray]] = None

    @classmethod
    def for_algebra(cls, algebra: Union[LieAlgebraBasis, str]) -> SpinorModule:
        if isinstance(algebra, str):
            algebra = LieAlgebraBasis.for_group(algebra)
        return cls(algebra)

    @property
    def dimension(self) -> int:
        return self.gammas[0].shape[0]

    @property
    def name(self) -> str:
        return f"spinor:su{self.algebra.n}"

    @property
    def is_even(self) -> bool:
        return self.algebra.dimension % 2 == 0

    def gamma(self, y: np.ndarray) -> np.ndarray:
        coords = self.algebra.coordinates(y)
        return sum((c * g for c, g in zip(coords, self.gammas)), np.zeros_like(self.gammas[0]))

    def ad_tilde(self, y: np.ndarray) -> np.ndarray:
        """``(1/4) sum_k gamma(x_k) gamma([y, x_k])``, extended complex-linearly."""
        out = np.zeros_like(self.gammas[0])
        for x, g in zip(self.algebra.matrices, self.gammas):
            out += g @ self.gamma(y @ x - x @ y)
        return out / 4

    def basis_images(self) -> List[np.ndarray]:
        if self._ad is None:
            self._ad = [self.ad_tilde(x) for x in self.algebra.matrices]
        return self._ad

    def cartan_images(self) -> List[np.ndarray]:
        return [self.ad_tilde(h) for h in self.algebra.cartan]

    def chirality(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """The grading ``omega`` and isometries onto its ``+1`` and ``-1`` eigenspaces.

        Raises
        ------
        NoChirality
            The Lie algebra has odd dimension.
        """
        m = self.algebra.dimension
        if m % 2:
            raise NoChirality(f"su({self.algebra.n}) has odd dimension {m}")
        # gamma_k = i G_k with Hermitian G_k
        product = reduce(np.matmul, [-1j * g for g in self.gammas])
        omega = product if (m * (m - 1) // 2) % 2 == 0 else 1j * product
        values, vectors = np.linalg.eigh((omega + omega.conj().T) / 2)
        plus = vectors[:, values > 0]
        minus = vectors[:, values < 0]
        return omega, plus, minus

    def blocks(self) -> List[np.ndarray]:
        """Isometries onto the chirality blocks, or the identity in the odd case."""
        if not self.is_even:
            return [np.eye(self.dimension, dtype=complex)]
        _, plus, minus = self.chirality()
        return [plus, minus]

    def block_cartan(self) -> List[List[np.ndarray]]:
        """``ad_tilde(h_j)`` compressed to every block."""
        images = self.cartan_images()
        return [[p.conj().T @ a @ p for a in images] for p in self.blocks()]

    def block_weights(self) -> List[List[Weight]]:
        """Joint integer eigenvalues of the ``ad_tilde(h_j)`` on every block."""
        return [joint_weights(mats) for mats in self.block_cartan()]

    def clifford_residual(self) -> float:
        worst = 0.0
        eye = np.eye(self.dimension)
        for k, a in enumerate(self.gammas):
            for l, b in enumerate(self.gammas):
                target = -2 * eye if k == l else 0 * eye
                worst = max(worst, float(np.abs(a @ b + b @ a - target).max()))
        return worst

    def homomorphism_residual(self) -> float:
        """Largest deviation from ``gamma([x, y]) = [ad_tilde(x), gamma(y)]`` on basis pairs."""
        worst = 0.0
        for x, ad in zip(self.algebra.matrices, self.basis_images()):
            for y, g in zip(self.algebra.matrices, self.gammas):
                lhs = self.gamma(x @ y - y @ x)
                worst = max(worst, float(np.abs(lhs - (ad @ g - g @ ad)).max()))
        return worst

    def lie_residual(self) -> float:
        """Largest deviation from ``ad_tilde([x, y]) = [ad_tilde(x), ad_tilde(y)]``."""
        worst = 0.0
        images = self.basis_images()
        for x, a in zip(self.algebra.matrices, images):
            for y, b in zip(self.algebra.matrices, images):
                lhs = self.ad_tilde(x @ y - y @ x)
                worst = max(worst, float(np.abs(lhs - (a @ b - b @ a)).max()))
        return worst

    def __repr__(self) -> str:
        return f"<SpinorModule su({self.algebra.n}) dimension={self.dimension}>"


@lru_cache(maxsize=None)
def _spinor(n: int) -> SpinorModule:
    return SpinorModule(LieAlgebraBasis.su(n))


def joint_weights(mats: Sequence[np.ndarray]) -> List[Weight]:
    """Joint eigenvalues of commuting Hermitian matrices, rounded to integers.

    Raises
    ------
    SpinError
        An eigenvalue is not within rounding distance of an integer.
    """
    generic = sum((math.sqrt(j + 2) * m for j, m in enumerate(mats)), np.zeros_like(mats[0]))
    _, vectors = np.linalg.eigh((generic + generic.conj().T) / 2)
    columns = [np.real(np.diag(vectors.conj().T @ m @ vectors)) for m in mats]
    out = []
    for values in zip(*columns):
        rounded = tuple(int(round(v)) for v in values)
        if max(abs(v - r) for v, r in zip(values, rounded)) > _ROUNDING:
            raise SpinError(f"eigenvalues {values} are not integers")
        out.append(rounded)
    return out


class DiracBlock(NamedTuple):
    """The classical Dirac operator restricted to ``M_lambda (x) Sigma``."""

    weight: Weight
    matrix: np.ndarray
    spectrum: np.ndarray
    self_adjoint_residual: float
    commutation_residual: float
    oracle_residual: float


def dirac_block(weight: Sequence[int], spinor: Optional[SpinorModule] = None, group: str = "su2") -> DiracBlock:
    """``sum_k (rho(x_k) (x) gamma(x_k) + (1/2) gamma(x_k) ad_tilde(x_k))`` on one isotypic block.

    The quantum Dirac operator is isospectral to this one, so the spectrum
    returned here is the quantum spectrum on the block of highest weight
    ``weight``.

    Raises
    ------
    RepresentationError
        ``weight`` is not dominant.
    """
    weight = tuple(weight)
    if not is_dominant(weight):
        raise RepresentationError(f"{weight} is not a dominant weight")
    rd = root_datum(group)
    spinor = spinor or _spinor(rd.rank + 1)
    lie = spinor.algebra
    rep = canonical_irrep(rd, weight)
    dim = rep.dimension

    cubic = sum((g @ a for g, a in zip(spinor.gammas, spinor.basis_images())), np.zeros_like(spinor.gammas[0]))
    matrix = np.kron(np.eye(dim), cubic / 2)
    for x, g in zip(lie.matrices, spinor.gammas):
        matrix = matrix + np.kron(lie.represent(rep, x), g)

    self_adjoint = float(np.linalg.norm(matrix - matrix.conj().T, 2))
    commutation = 0.0
    for h, a in zip(lie.cartan, spinor.cartan_images()):
        lifted = np.kron(lie.represent(rep, h), np.eye(spinor.dimension)) + np.kron(np.eye(dim), a)
        commutation = max(commutation, float(np.linalg.norm(matrix @ lifted - lifted @ matrix, 2)))

    spectrum = np.sort(np.linalg.eigvalsh((matrix + matrix.conj().T) / 2))
    oracle = np.sort(np.real(scipy.linalg.eig(matrix, right=False)))
    _log.debug("Dirac block %s: dimension %d", weight, len(spectrum))
    return DiracBlock(
        weight,
        matrix,
        spectrum,
        self_adjoint,
        commutation,
        float(np.abs(spectrum - oracle).max()),
    )


LiftModule = Union[SpinorModule, Rep]


def _target_blocks(module: LiftModule) -> Tuple[str, List[List[np.ndarray]]]:
    if isinstance(module, SpinorModule):
        return module.name, module.block_cartan()
    mats = classical_matrices(module)
    return module.name, [[h.astype(complex) for h in mats["h"]]]


def lift_exponents(action: ActionSpec, weights: Sequence[Weight], twist: int, factor: int = 0) -> List[Fraction]:
    """Exponents of ``s_q(sigma_(2))`` times the central twist on weight vectors.

    ``sigma_(2)`` acts on a vector of weight ``w`` by ``exp(i phi (w.y2 + twist))``.
    """
    y2 = action.factors[factor].y2
    return [sum((Fraction(c) * y for c, y in zip(w, y2)), Fraction(0)) + twist for w in weights]


def central_offset(exponents: Sequence[Fraction]) -> Optional[Fraction]:
    """Common fractional offset of a block that the central twist can absorb.

    Returns ``0`` or ``1/2`` when every exponent differs from it by an
    integer, and ``None`` otherwise. A half-integer offset is the sign of
    the double cover, which acts by a scalar on the block.
    """
    if not exponents:
        return Fraction(0)
    offset = exponents[0] - math.floor(exponents[0])
    if offset not in (0, Fraction(1, 2)):
        return None
    if any((e - offset).denominator != 1 for e in exponents):
        return None
    return offset


def spin_lift_check(action: ActionSpec, twists: Optional[Sequence[int]] = None, module: Optional[LiftModule] = None) -> Report:
    """Check that ``sigma -> s_q(sigma_(2))`` twisted centrally per block is a lift.

    The torus exponentials are identified with ``exp(i phi y2.h)`` acting
    through ``ad_tilde`` on the spinor module (or through a supplied module
    in its place). Every block receives an integer twist ``exp(i phi t)``
    on top of its :func:`central_offset` ``c``, so the lift is
    ``s_q(sigma_(2)) exp(i phi (t + c))``.

    Checks per factor and block:

    - periodicity: the exponents share an absorbable offset, so the lift
      is a genuine representation of the acting group;
    - full turn: ``phi = 2 pi`` gives the identity exactly when periodic;
    - conjugation: conjugating a sample operator by the lift and by
      ``s_q(sigma_(2))`` agree, using :func:`scipy.linalg.expm`. The twist
      is scalar on a block, so this is a sanity identity on the
      numerics rather than a constraint on ``t``.
    """
    rd = action.root_datum
    module = module if module is not None else _spinor(rd.rank + 1)
    name, blocks = _target_blocks(module)
    twists = tuple(twists) if twists is not None else (0,) * len(blocks)
    if len(twists) != len(blocks):
        raise SpinError(f"{name} has {len(blocks)} blocks but {len(twists)} twists were given")

    report = Report("spin-lift", {"action": action.name, "module": name, "twists": list(twists)})
    rng = np.random.default_rng(0)
    for f_index, factor in enumerate(action.factors):
        turns = [Fraction(1, 7), Fraction(2, 5)] if factor.order is None else [Fraction(j, factor.order) for j in range(1, factor.order)]
        for b_index, (mats, twist) in enumerate(zip(blocks, twists)):
            weights = joint_weights(mats)
            exponents = lift_exponents(action, weights, twist, f_index)
            offset = central_offset(exponents)
            witness = None
            if offset is None:
                witness = {
                    "factor": f_index,
                    "block": b_index,
                    "weight": list(weights[0]),
                    "eigenvalue": str(exponents[0]),
                    "offsets": sorted({str(e - math.floor(e)) for e in exponents}),
                }
            report.check(
                f"periodic/{f_index}/{b_index}",
                offset is not None,
                witness,
                offset=None if offset is None else str(offset),
            )
            shift = twist + float(offset or 0)

            generator = sum((float(y) * m for y, m in zip(factor.y2, mats)), np.zeros_like(mats[0]))
            sample = rng.standard_normal(generator.shape) + 1j * rng.standard_normal(generator.shape)
            worst = 0.0
            for t in turns:
                phi = 2 * math.pi * float(t)
                s = scipy.linalg.expm(1j * phi * generator)
                lift = s * np.exp(1j * phi * shift)
                lhs = lift @ sample @ np.linalg.inv(lift)
                rhs = s @ sample @ np.linalg.inv(s)
                worst = max(worst, float(np.abs(lhs - rhs).max()))
            report.check(f"conjugation/{f_index}/{b_index}", worst <= 1e-9, {"residual": worst}, residual=worst)

            full_turn = scipy.linalg.expm(2j * math.pi * (generator + shift * np.eye(len(generator))))
            residual = float(np.abs(full_turn - np.eye(len(generator))).max())
            report.check(
                f"full-turn/{f_index}/{b_index}",
                (residual <= 1e-9) == (offset is not None),
                {"residual": residual},
                residual=residual,
            )
    return report.finish()


def lift_twist_window(action: ActionSpec, window: Sequence[int] = range(-5, 6), module: Optional[LiftModule] = None) -> List[Tuple[int, ...]]:
    """All twist tuples from ``window`` for which :func:`spin_lift_check` passes."""
    rd = action.root_datum
    module = module if module is not None else _spinor(rd.rank + 1)
    _, blocks = _target_blocks(module)
    out = []
    for twists in cartesian(window, repeat=len(blocks)):
        if spin_lift_check(action, twists, module).passed:
            out.append(twists)
    return out


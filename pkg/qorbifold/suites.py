from __future__ import annotations

from typing import Callable, Dict, List, Optional, Tuple, TYPE_CHECKING
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

import logging

import numpy as np

from .coordalg import (
    CoordAlgebra,
    MatrixCoeff,
    TensorElement,
    audit_product_placement,
    verify_hopf,
    verify_su2_relations,
    verify_su3_relations,
)
from .crossedprod import check_effective_faithful, verify_crossed_product
from .equivariant import (
    Cochain,
    InvariantChain,
    chern_character,
    check_equivalence,
    conjugate_projector,
    conjugation_intertwiners,
    corep_column_projector,
    cyclic_lambda,
    hochschild_b,
    pair_chain,
    trivial_projector,
)
from .errors import UsageError
from .orbifold import (
    ActionSpec,
    Factor,
    charge_table,
    enumerate_su3_actions,
    in_action_family,
    parse_preset,
    family_action,
    scan_su3_actions,
    validate_action,
)
from .repcat import A2, builtin_rep, canonical_irrep, root_datum, tensor_decomposition, verify_defining_relations
from .report import Report
from .scalars import QScalar, eval_numeric
from .spin import SpinorModule, dirac_block, lift_twist_window, spin_lift_check
from .utils import _JSON_LOADER

if TYPE_CHECKING:
    from .cli import RunConfig

__all__ = ("SUITES", "ADJOINT_CHARGES", "SPINOR_CARTAN_DIAGONALS", "SU2_LIFT_PRESETS", "run_suite", "load_cg_golden")

_log = logging.getLogger(__name__)

GOLDEN_PATH = Path(__file__).parent / "data" / "cg_golden.json"

# (phi, theta)-charges of the SU(3) generators under the adjoint-type torus action
ADJOINT_CHARGES: Dict[str, Tuple[int, int]] = {
    "t11": (0, 0),
    "t12": (2, -1),
    "t13": (1, 1),
    "t21": (-2, 1),
    "t22": (0, 0),
    "t23": (-1, 2),
    "t31": (-1, -1),
    "t32": (1, -2),
    "t33": (0, 0),
}

# eigenvalues of ad_tilde(h_1), ad_tilde(h_2) on each chirality block of the su(3) spinor module
SPINOR_CARTAN_DIAGONALS: Tuple[Tuple[int, ...], Tuple[int, ...]] = (
    (1, 2, -1, 0, 0, 1, -2, -1),
    (1, -1, 2, 0, 0, -2, 1, -1),
)

# SU(2) actions whose spinor lift must exist for every integer twist, both parities of l + k
SU2_LIFT_PRESETS = ("sphere", "wpp:1,2", "teardrop:1,2", "teardrop:1,3", "wpp:2,3")

_SCALAR_POINTS = (0.3, 0.5, 0.9)


def _option(config: Optional[RunConfig], name: str, default):
    value = getattr(config, name, None) if config is not None else None
    return default if value is None else value


def _groups(config: Optional[RunConfig]) -> List[str]:
    group = _option(config, "group", None)
    return [group] if group else ["su2", "su3"]


def _uq_relations(config: Optional[RunConfig]) -> Report:
    names = ["su3:λ1", "su3:λ1v", "su3:λ2", "su2:1", "su2:2"]
    report = Report("uq-relations", {"modules": names})
    for name in names:
        report.extend(verify_defining_relations(builtin_rep(name)), name)
    return report


def _hopf(config: Optional[RunConfig]) -> Report:
    cutoff = _option(config, "cutoff", 2)
    groups = _groups(config)
    report = Report("hopf", {"groups": groups, "cutoff": cutoff})
    for group in groups:
        report.extend(verify_hopf(CoordAlgebra(group, cutoff)), group)
    return report


def _su2_relations(config: Optional[RunConfig]) -> Report:
    cutoff = _option(config, "cutoff", 2)
    selected, outcome = audit_product_placement(cutoff)
    report = verify_su2_relations(CoordAlgebra("su2", cutoff, selected))
    report.config["audit"] = outcome
    report.config["selected_placement"] = selected
    return report


def _su3_relations(config: Optional[RunConfig]) -> Report:
    return verify_su3_relations(CoordAlgebra("su3", _option(config, "cutoff", 2)))


def load_cg_golden(path: Optional[Path] = None) -> dict:
    """The shipped Clebsch-Gordan tables of ``lambda_1 (x) lambda_1`` for ``su3``."""
    path = path or GOLDEN_PATH
    return _JSON_LOADER(path.read_text(encoding="utf-8"))


def _golden_value(entry: dict) -> QScalar:
    square = entry["square"]
    num = {int(k): v for k, v in square["num"].items()}
    den = {int(k): v for k, v in square["den"].items()}
    return QScalar.rational_function(num, den).sqrt() * entry["sign"]


def _cg_golden(config: Optional[RunConfig]) -> Report:
    golden = load_cg_golden()
    rd = root_datum(golden["group"])
    left, right = tuple(golden["left"]), tuple(golden["right"])
    report = Report("cg-golden", {"left": left, "right": right, "path": str(GOLDEN_PATH.name)})
    blocks = {b.weight: b for b in tensor_decomposition(rd, left, right) if b.copy == 0}
    dim_right = canonical_irrep(rd, right).dimension

    expected: Dict[Tuple[int, ...], Dict[Tuple[int, int], QScalar]] = {}
    for entry in golden["entries"]:
        summand = tuple(entry["summand"])
        row = (entry["m"] - 1) * dim_right + (entry["m_prime"] - 1)
        expected.setdefault(summand, {})[(row, entry["k"] - 1)] = _golden_value(entry)

    signs = {}
    for summand, values in expected.items():
        key = ",".join(map(str, summand))
        block = blocks.get(summand)
        if block is None:
            report.check(f"{key}/present", False, {"summand": summand})
            continue
        first = next(iter(sorted(values)))
        sign = 1 if block.matrix[first] == values[first] else -1
        signs[key] = sign
        for (row, col), value in sorted(values.items()):
            actual = block.matrix[row, col]
            ok = actual == value * sign
            m, m_prime = divmod(row, dim_right)
            report.check(
                f"{key}/({m + 1},{m_prime + 1})->{col + 1}",
                ok,
                {"actual": str(actual), "expected": str(value * sign)},
            )
        stray = [(i, j) for i, j, v in block.matrix.entries() if (i, j) not in values and v]
        report.check(f"{key}/others-zero", not stray, {"entries": stray[:5]}, nonzero=len(stray))
        if sign != golden["block_signs"].get(key, 1):
            report.note(f"block {key} matches the table up to an overall sign {sign}")
    report.config["block_signs"] = signs
    return report


def _action_family(config: Optional[RunConfig]) -> Report:
    kbox = _option(config, "kbox", 2)
    xs = tuple(_option(config, "xs", (0, 1, 2)))
    report = Report("prop5", {"kbox": kbox, "x": list(xs)})

    family = enumerate_su3_actions(xs, kbox)
    report.check("family-valid", True, count=len(family))
    points = {(a.factors[0].y1, a.factors[0].y2) for a in family}

    in_window, outside = scan_su3_actions(kbox)
    if set(xs) != {0, 1, 2}:
        in_window = {p for p in in_window if int(3 * p[0][0]) % 3 in xs}
    report.check(
        "no-false-accepts",
        not outside,
        {"point": [[str(c) for c in y] for y in outside[0]]} if outside else None,
        outside=len(outside),
    )
    missing = points - in_window
    extra = in_window - points
    report.check("no-false-rejects", not missing, {"missing": len(missing)}, family=len(points))
    report.check("window-matches-family", not extra, {"extra": len(extra)}, scanned=len(in_window))

    y1 = (Fraction(1, 2), Fraction(0))
    y2 = (Fraction(0), Fraction(0))
    valid, certificate = validate_action(ActionSpec(A2, [Factor(y1, y2)], "non-family"))
    report.check(
        "non-family-rejected",
        not valid and not in_action_family(y1, y2),
        {"certificate": certificate},
        certificate=certificate,
    )
    return report


def _adjoint_table(config: Optional[RunConfig]) -> Report:
    action = parse_preset("su3-adjoint")
    algebra = CoordAlgebra("su3", 1)
    table = charge_table(action, algebra.generators())
    report = Report("adjoint-table", {"action": action.name})
    for name, expected in ADJOINT_CHARGES.items():
        found = tuple(table[name])
        report.check(name, found == expected, {"charge": found, "expected": expected}, charge=found)
    return report


def _spin_examples(config: Optional[RunConfig]) -> Report:
    window = list(_option(config, "twists", range(-5, 6)))
    report = Report("spin-examples", {"twists": window})

    for preset in SU2_LIFT_PRESETS:
        passing = lift_twist_window(parse_preset(preset), window)
        failed = [t for t in window if (t,) not in passing]
        report.check(f"su2-lift-family/{preset}", not failed, {"twists": failed}, passing=len(passing))

    su3 = SpinorModule.for_algebra("su3")
    report.check("su3-clifford", su3.clifford_residual() <= 1e-9, residual=su3.clifford_residual())
    report.check("su3-ad-tilde-homomorphism", su3.lie_residual() <= 1e-9, residual=su3.lie_residual())
    expected = [sorted(d) for d in SPINOR_CARTAN_DIAGONALS]
    for b, weights in enumerate(su3.block_weights()):
        found = [sorted(w[j] for w in weights) for j in range(2)]
        report.check(f"spinor-cartan-block/{b}", found == expected, {"found": found, "expected": expected}, weights=weights)

    action = family_action(1)
    spinor = spin_lift_check(action, module=su3)
    report.extend(spinor, "x=1/spinor")
    surrogate = builtin_rep("su3:λ1")
    fails = spin_lift_check(action, module=surrogate)
    window_hits = lift_twist_window(action, window, surrogate)
    report.check(
        "x=1/surrogate-fails",
        not fails.passed and not window_hits,
        {"passing_twists": window_hits},
        witnesses=[c.witness for c in fails.failures()][:1],
    )
    report.note("lifts are exact on the adjoint-type spinor module and fail on the weight (1,0) surrogate")
    return report


def _dirac_blocks(config: Optional[RunConfig]) -> Report:
    group = _option(config, "group", "su2")
    default = [(0,), (1,), (2,)] if group == "su2" else [(0, 0), (1, 0), (0, 1)]
    weights = [tuple(w) for w in _option(config, "weights", default)]
    report = Report("dirac-blocks", {"group": group, "weights": weights})
    # blocks are independent per highest weight
    with ThreadPoolExecutor(max_workers=min(4, len(weights)) or 1) as pool:
        blocks = list(pool.map(lambda w: dirac_block(w, group=group), weights))
    for weight, block in zip(weights, blocks):
        key = ",".join(map(str, weight))
        report.check(f"{key}/self-adjoint", block.self_adjoint_residual <= 1e-10, residual=block.self_adjoint_residual)
        report.check(f"{key}/commutes-with-cartan", block.commutation_residual <= 1e-9, residual=block.commutation_residual)
        report.check(
            f"{key}/oracle-spectrum",
            block.oracle_residual <= 1e-9,
            residual=block.oracle_residual,
            spectrum=[round(float(v), 9) for v in block.spectrum],
        )
    report.note("the quantum Dirac operator is isospectral to the classical one; spectra are classical")
    return report


def _crossed(config: Optional[RunConfig]) -> Report:
    action = parse_preset(_option(config, "preset", "teardrop:1,3:p=3"))
    cutoff = _option(config, "cutoff", 2)
    report = Report("crossed", {"action": action.name, "cutoff": cutoff})
    report.extend(verify_crossed_product(action, cutoff), "algebra")
    report.extend(check_effective_faithful(action, 1), "faithful")
    return report


def _invariant_pairs(action: ActionSpec, algebra: CoordAlgebra) -> List[Tuple[MatrixCoeff, ...]]:
    fundamentals = [t for t in algebra.basis(1) if any(t.weight)]
    out = []
    for a in fundamentals:
        for b in fundamentals:
            chain = InvariantChain(action, TensorElement(algebra, {(a, b): 1}))
            if chain.is_invariant():
                out.append((a, b))
    return out


def _chern(config: Optional[RunConfig]) -> Report:
    action = parse_preset(_option(config, "preset", "teardrop:1,3"))
    degrees = list(_option(config, "degrees", (0, 2)))
    report = Report("chern", {"action": action.name, "degrees": degrees})

    p = corep_column_projector(action)
    algebra = p.algebra
    report.extend(p.verify(), "projector")

    chains = {}
    for degree in degrees:
        chain = chern_character(p, degree)
        chains[degree] = chain
        bad = chain.non_invariant()
        report.check(
            f"ch{degree}/in-invariant-complex",
            not bad,
            {"monomial": [str(t) for t in bad[0]]} if bad else None,
            monomials=len(chain),
        )
    if 0 in chains:
        report.check("ch0/is-trace", chains[0] == InvariantChain.from_element(action, p.trace()))
    witness, charges = None, None
    for chain in chains.values():
        witness = chain.nonlocal_witness()
        if witness is not None:
            charges = [list(map(str, c)) for c in chain.factor_charges(witness)]
            break
    report.check(
        "nonlocal-witness",
        witness is not None,
        None,
        monomial=[str(t) for t in witness] if witness else None,
        charges=charges,
    )

    trivial = trivial_projector(action, 2, algebra)
    report.extend(trivial.verify(), "trivial")
    report.check(
        "trivial/ch0-is-unit",
        chern_character(trivial, 0) == InvariantChain.from_element(action, algebra.unit()),
    )

    phases = [QScalar.zeta(1, 4), QScalar(1)]
    conjugate = conjugate_projector(p, phases)
    gamma, gamma_prime = conjugation_intertwiners(p, phases)
    report.extend(check_equivalence(p, conjugate, gamma, gamma_prime), "equivalence")
    ch0 = chern_character(p, 0)
    tau = Cochain.from_rule(algebra, 0, lambda m: sum(m[0].weight) + 1, [m for m, _ in ch0.terms()])
    report.check(
        "pairing-conjugation-invariant",
        pair_chain(tau, ch0) == pair_chain(tau, chern_character(conjugate, 0)),
    )

    sigma = Cochain.from_rule(algebra, 0, lambda m: m[0].row - m[0].col + 1, algebra.basis(2))
    triples = [(a, b, c) for a in algebra.basis(1)[1:] for b in algebra.basis(1)[1:3] for c in algebra.basis(1)[1:]]
    bb = hochschild_b(hochschild_b(sigma))
    bad = next((m for m in triples if bb.value(m)), None)
    report.check("b-squared-zero", bad is None, {"monomial": [str(t) for t in bad]} if bad else None, samples=len(triples))

    rho = Cochain.dual_basis(algebra, triples[0])
    cycled = rho
    for _ in range(rho.degree + 1):
        cycled = cyclic_lambda(cycled)
    report.check("lambda-order", cycled.support() == rho.support() and cycled.value(triples[0]) == 1)

    restricted = sigma.restrict(action)
    pairs = _invariant_pairs(action, algebra)
    bad = next((m for m in pairs if hochschild_b(sigma).value(m) != hochschild_b(restricted).value(m)), None)
    report.check(
        "b-restricts-to-invariants",
        bad is None,
        {"monomial": [str(t) for t in bad]} if bad else None,
        samples=len(pairs),
    )
    return report


def _random_scalar(rng: np.random.Generator) -> QScalar:
    terms = {int(e): int(c) for e, c in zip(rng.integers(-3, 4, 3), rng.integers(-3, 4, 3)) if c}
    x = QScalar.laurent(terms or {0: 1})
    kind = rng.integers(0, 3)
    if kind == 1:
        x = x + QScalar.laurent({int(rng.integers(-2, 3)): 1}) * QScalar.zeta(int(rng.integers(1, 3)), 3)
    elif kind == 2:
        x = x + QScalar.rational_function({0: 1, 4: 1}, {0: 1}).sqrt() * int(rng.integers(1, 3))
    return x


def _close(a: complex, b: complex) -> bool:
    return abs(a - b) <= 1e-12 * max(1.0, abs(b))


def _scalar_axioms(config: Optional[RunConfig]) -> Report:
    samples = _option(config, "samples", 1000)
    seed = _option(config, "seed", 0)
    rng = np.random.default_rng(seed)
    report = Report("scalar-axioms", {"samples": samples, "seed": seed, "q": list(_SCALAR_POINTS)})
    failures: Dict[str, Optional[int]] = dict.fromkeys(
        ["commutative", "associative", "distributive", "inverse", "conj-involutive", "numeric-homomorphism"]
    )
    for i in range(samples):
        a, b, c = _random_scalar(rng), _random_scalar(rng), _random_scalar(rng)
        checks = {
            "commutative": a * b == b * a and a + b == b + a,
            "associative": (a * b) * c == a * (b * c),
            "distributive": a * (b + c) == a * b + a * c,
            "inverse": not a or a * a.inv() == 1,
            "conj-involutive": a.conj().conj() == a,
        }
        numeric = True
        for q in _SCALAR_POINTS:
            ea, eb = eval_numeric(a, q), eval_numeric(b, q)
            numeric = numeric and _close(eval_numeric(a * b, q), ea * eb) and _close(eval_numeric(a + b, q), ea + eb)
            if b:
                numeric = numeric and _close(eval_numeric(a / b, q), ea / eb)
        checks["numeric-homomorphism"] = numeric
        for name, ok in checks.items():
            if not ok and failures[name] is None:
                failures[name] = i
    for name, index in failures.items():
        report.check(name, index is None, {"sample": index})
    return report


SUITES: Dict[str, Callable[[Optional["RunConfig"]], Report]] = {
    "uq-relations": _uq_relations,
    "hopf": _hopf,
    "su2-relations": _su2_relations,
    "su3-relations": _su3_relations,
    "cg-golden": _cg_golden,
    "prop5": _action_family,
    "adjoint-table": _adjoint_table,
    "spin-examples": _spin_examples,
    "dirac-blocks": _dirac_blocks,
    "crossed": _crossed,
    "chern": _chern,
    "scalar-axioms": _scalar_axioms,
}


def run_suite(name: str, config: Optional[RunConfig] = None) -> Report:
    """Run one verification suite by name.

    Raises
    ------
    UsageError
        The suite name is unknown.
    """
    try:
        suite = SUITES[name]
    except KeyError:
        raise UsageError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}") from None
    _log.info("running suite %s", name)
    report = suite(config)
    report.suite = name
    report.finish()
    _log.info("suite %s finished: %d checks, %d failed", name, len(report.checks), len(report.failures()))
    return report

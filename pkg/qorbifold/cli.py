from __future__ import annotations

from typing import Any, Dict, List, Optional, Sequence, Tuple
from dataclasses import asdict, dataclass, field
from pathlib import Path

import argparse
import logging
import sys

from . import __version__
from .coordalg import CoordAlgebra, CoordElement, UqMonomial
from .crossedprod import CrossedProduct, multiplication_table
from .equivariant import chern_character, corep_column_projector, trivial_projector
from .errors import QorbifoldException, UsageError
from .orbifold import (
    ActionSpec,
    act,
    charge_of,
    charge_table,
    enumerate_su3_actions,
    invariant_basis,
    parse_preset,
)
from .repcat import root_datum
from .report import Report, jsonable
from .spin import dirac_block, lift_twist_window, spin_lift_check
from .suites import SUITES, run_suite
from .utils import _to_json, parse_fraction, parse_int_list

__all__ = ("RunConfig", "compute", "build_parser", "main", "COMPUTATIONS")

_log = logging.getLogger(__name__)

PROJECTORS = ("su2-column", "column", "trivial")


@dataclass
class RunConfig:
    """Options shared by every subcommand.

    ``preset`` names the action; ``projector`` is only read by ``chern``.
    Unset options fall back to per-suite defaults.
    """

    group: Optional[str] = None
    preset: Optional[str] = None
    projector: Optional[str] = None
    cutoff: Optional[int] = None
    q: float = 0.5
    twists: Optional[List[int]] = None
    kbox: Optional[int] = None
    xs: Optional[List[int]] = None
    degrees: Optional[List[int]] = None
    weights: Optional[List[Tuple[int, ...]]] = None
    samples: Optional[int] = None
    seed: Optional[int] = None
    out: Optional[Path] = None
    verbosity: int = 0
    options: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.cutoff is not None and self.cutoff < 0:
            raise UsageError(f"--cutoff must be non-negative, not {self.cutoff}")
        if not 0.0 < self.q < 1.0:
            raise UsageError(f"--q must lie in (0, 1), not {self.q}")
        if self.group is not None:
            root_datum(self.group)

    @property
    def action(self) -> ActionSpec:
        if self.preset is None:
            raise UsageError("this command needs --preset")
        return parse_preset(self.preset)

    @property
    def cyclotomic_order(self) -> int:
        return self.action.cyclotomic_order if self.preset else 1

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data.pop("verbosity")
        data["out"] = str(self.out) if self.out else None
        if self.preset:
            data["cyclotomic_order"] = self.cyclotomic_order
        return jsonable(data)


def _group_of(config: RunConfig) -> str:
    if config.group:
        return config.group
    return config.action.root_datum.group if config.preset else "su2"


def _named_element(algebra: CoordAlgebra, name: str) -> CoordElement:
    """``alpha``, ``t12``, ``unit`` or a trailing ``*`` for the adjoint."""
    name = name.strip()
    starred = name.endswith("*")
    base = name[:-1] if starred else name
    gens = algebra.generators()
    gens["unit"] = algebra.unit()
    if base not in gens:
        raise UsageError(f"unknown element {name!r}; choose from {', '.join(gens)}")
    x = gens[base]
    return x.star() if starred else x


def _element_word(algebra: CoordAlgebra, text: str) -> CoordElement:
    """A product of named elements separated by spaces."""
    value = algebra.unit()
    for token in text.split():
        value = value * _named_element(algebra, token)
    return value


def _compute_mul(config: RunConfig) -> Dict[str, Any]:
    algebra = CoordAlgebra(_group_of(config), config.cutoff if config.cutoff is not None else 4)
    left = _element_word(algebra, config.options["left"])
    right = _element_word(algebra, config.options["right"])
    product = left * right
    return {"left": config.options["left"], "right": config.options["right"], "product": product.to_json(), "text": str(product)}


def _compute_pair(config: RunConfig) -> Dict[str, Any]:
    algebra = CoordAlgebra(_group_of(config), config.cutoff if config.cutoff is not None else 4)
    x = _element_word(algebra, config.options["element"])
    word = UqMonomial.parse(algebra.root_datum, config.options["word"])
    value = x.pair(word)
    return {"element": config.options["element"], "word": str(word), "value": value.to_json(), "text": str(value)}


def _compute_act(config: RunConfig) -> Dict[str, Any]:
    action = config.action
    algebra = CoordAlgebra(action.root_datum, config.cutoff if config.cutoff is not None else 4)
    name = config.options["element"]
    x = _element_word(algebra, name)
    (charge,) = charge_table(action, {name: x}).values()
    out: Dict[str, Any] = {"action": action.name, "element": name, "charge": [str(c) for c in charge]}
    g = config.options.get("g")
    if g:
        element = tuple(parse_fraction(part) for part in g.split(","))
        out["g"] = [str(c) for c in element]
        out["image"] = act(action, element, x).to_json()
    return out


def _compute_invariants(config: RunConfig) -> Dict[str, Any]:
    action = config.action
    cutoff = config.cutoff if config.cutoff is not None else 3
    basis = invariant_basis(action, cutoff)
    return {
        "action": action.name,
        "cutoff": cutoff,
        "invariants": [{"label": str(t), "charge": [str(c) for c in charge_of(action, t)]} for t in basis],
    }


def _compute_actions_enumerate(config: RunConfig) -> Dict[str, Any]:
    if (config.group or "su3") != "su3":
        raise UsageError("closed-form enumeration exists for su3 only")
    xs = config.xs if config.xs is not None else [0, 1, 2]
    kbox = config.kbox if config.kbox is not None else 2
    actions = enumerate_su3_actions(xs, kbox)
    return {"x": xs, "kbox": kbox, "count": len(actions), "actions": [a.to_json() for a in actions]}


def _parse_crossed(ctx: CrossedProduct, algebra: CoordAlgebra, text: str):
    head, sep, name = text.partition(":")
    if not sep:
        raise UsageError(f"crossed elements are written 'g:element', not {text!r}")
    g = tuple(parse_int_list(head))
    return ctx.element({g: _element_word(algebra, name)})


def _compute_crossed_mul(config: RunConfig) -> Dict[str, Any]:
    action = config.action
    cutoff = config.cutoff if config.cutoff is not None else 4
    ctx = CrossedProduct(action, CoordAlgebra(action.root_datum, cutoff))
    left = _parse_crossed(ctx, ctx.algebra, config.options["left"])
    right = _parse_crossed(ctx, ctx.algebra, config.options["right"])
    return {"action": action.name, "product": (left * right).to_json()}


def _compute_crossed_table(config: RunConfig) -> Dict[str, Any]:
    action = config.action
    cutoff = config.cutoff if config.cutoff is not None else 1
    rows = multiplication_table(action, cutoff)
    return {"action": action.name, "cutoff": cutoff, "entries": rows}


def _compute_spin_check(config: RunConfig) -> Dict[str, Any]:
    action = config.action
    report = spin_lift_check(action, config.twists)
    window = lift_twist_window(action) if config.options.get("window") else None
    return {"action": action.name, "report": report.to_dict(), "passing_twists": window}


def _parse_highest_weight(group: str, text: str) -> Tuple[int, ...]:
    if group == "su2":
        value = parse_fraction(text) * (2 if "/" in text else 1)
        if value.denominator != 1:
            raise UsageError(f"su2 highest weight must be a half-integer, not {text}")
        return (int(value),)
    weight = tuple(parse_int_list(text))
    if len(weight) != root_datum(group).rank:
        raise UsageError(f"{group} highest weights have {root_datum(group).rank} coordinates")
    return weight


def _compute_dirac_spectrum(config: RunConfig) -> Dict[str, Any]:
    group = config.group or "su2"
    weight = _parse_highest_weight(group, config.options["lambda"])
    block = dirac_block(weight, group=group)
    return {
        "group": group,
        "weight": list(weight),
        "spectrum": [round(float(v), 9) for v in block.spectrum],
        "self_adjoint_residual": block.self_adjoint_residual,
        "oracle_residual": block.oracle_residual,
    }


def _compute_chern(config: RunConfig) -> Dict[str, Any]:
    action = config.action
    kind = config.projector or "su2-column"
    if kind not in PROJECTORS:
        raise UsageError(f"unknown projector {kind!r}; choose from {', '.join(PROJECTORS)}")
    if kind == "trivial":
        p = trivial_projector(action, 1)
    else:
        p = corep_column_projector(action, config.options.get("column") or 0)
    degrees = config.degrees if config.degrees is not None else [0, 2]
    chains = []
    for degree in degrees:
        chain = chern_character(p, degree)
        payload = chain.to_json()
        witness = chain.nonlocal_witness()
        payload["nonlocal_witness"] = [str(t) for t in witness] if witness else None  # type: ignore
        chains.append(payload)
    return {"action": action.name, "projector": kind, "dimension": p.dimension, "chains": chains}


COMPUTATIONS = {
    "mul": _compute_mul,
    "pair": _compute_pair,
    "act": _compute_act,
    "invariants": _compute_invariants,
    "actions-enumerate": _compute_actions_enumerate,
    "crossed-mul": _compute_crossed_mul,
    "crossed-table": _compute_crossed_table,
    "spin-check": _compute_spin_check,
    "dirac-spectrum": _compute_dirac_spectrum,
    "chern": _compute_chern,
}


def compute(subcommand: str, config: RunConfig) -> Dict[str, Any]:
    """Run one computation and return plain JSON data.

    Raises
    ------
    UsageError
        Unknown subcommand or missing options.
    """
    try:
        handler = COMPUTATIONS[subcommand]
    except KeyError:
        raise UsageError(f"unknown computation {subcommand!r}") from None
    try:
        return jsonable(handler(config))
    except KeyError as exc:
        raise UsageError(f"{subcommand} needs the option {exc.args[0]!r}") from None


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--group", choices=("su2", "su3"))
    parser.add_argument("--preset", help="action preset, for example teardrop:1,3 or su3-prop5:1")
    parser.add_argument("--cutoff", type=int)
    parser.add_argument("--q", type=float, default=0.5, help="numeric evaluation point in (0, 1)")
    parser.add_argument("--out", type=Path, help="write JSON here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qorbifold", description="Exact computations on quantum orbifolds of SU(2) and SU(3).")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    parser.add_argument("-q", "--quiet", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="run a verification suite")
    verify.add_argument("suite", choices=sorted(SUITES))
    verify.add_argument("--x", dest="xs", type=parse_int_list)
    verify.add_argument("--kbox", type=int)
    verify.add_argument("--twists", type=parse_int_list)
    verify.add_argument("--samples", type=int)
    verify.add_argument("--seed", type=int)
    _common(verify)

    mul = sub.add_parser("mul", help="multiply two elements")
    mul.add_argument("left")
    mul.add_argument("right")
    _common(mul)

    pair = sub.add_parser("pair", help="pair an element with a word in U_q(g)")
    pair.add_argument("element")
    pair.add_argument("word")
    _common(pair)

    act_ = sub.add_parser("act", help="charge of an element, and its image under a group element")
    act_.add_argument("--element", required=True)
    act_.add_argument("--g", help="comma-separated turns or residues, one per factor")
    _common(act_)

    invariants = sub.add_parser("invariants", help="invariant basis coefficients up to a cutoff")
    _common(invariants)

    actions = sub.add_parser("actions", help="closed-form SU(3) actions")
    actions_sub = actions.add_subparsers(dest="action_command", required=True)
    enumerate_ = actions_sub.add_parser("enumerate")
    enumerate_.add_argument("--x", dest="xs", type=parse_int_list)
    enumerate_.add_argument("--kbox", type=int)
    _common(enumerate_)

    crossed = sub.add_parser("crossed", help="crossed product by a finite group")
    crossed_sub = crossed.add_subparsers(dest="crossed_command", required=True)
    crossed_mul = crossed_sub.add_parser("mul")
    crossed_mul.add_argument("left", help="g:element, for example 1:alpha")
    crossed_mul.add_argument("right")
    _common(crossed_mul)
    _common(crossed_sub.add_parser("table"))

    spin = sub.add_parser("spin", help="spin lifts")
    spin_sub = spin.add_subparsers(dest="spin_command", required=True)
    check = spin_sub.add_parser("check")
    check.add_argument("--twists", type=parse_int_list)
    check.add_argument("--window", action="store_true", help="also list passing twists in -5..5")
    _common(check)

    dirac = sub.add_parser("dirac", help="classical Dirac operator blocks")
    dirac_sub = dirac.add_subparsers(dest="dirac_command", required=True)
    spectrum = dirac_sub.add_parser("spectrum")
    spectrum.add_argument("--lambda", dest="weight", required=True, help="su2 label 2*lambda (1 is spin one half, 1/2 also accepted) or 1,0 for su3")
    _common(spectrum)

    chern = sub.add_parser("chern", help="Chern character chains of an equivariant projector")
    chern.add_argument("--group", choices=("su2", "su3"))
    chern.add_argument("--preset", dest="projector", choices=PROJECTORS, default="su2-column")
    chern.add_argument("--action", dest="preset", required=True)
    chern.add_argument("--degree", dest="degrees", type=parse_int_list)
    chern.add_argument("--column", type=int, default=0)
    chern.add_argument("--cutoff", type=int)
    chern.add_argument("--q", type=float, default=0.5)
    chern.add_argument("--out", type=Path)
    return parser


def _subcommand(args: argparse.Namespace) -> str:
    if args.command == "actions":
        return "actions-enumerate"
    if args.command == "crossed":
        return f"crossed-{args.crossed_command}"
    if args.command == "spin":
        return "spin-check"
    if args.command == "dirac":
        return "dirac-spectrum"
    return args.command


_OPTION_KEYS = ("left", "right", "element", "word", "g", "window", "column")


def _config(args: argparse.Namespace) -> RunConfig:
    get = vars(args).get
    options = {key: get(key) for key in _OPTION_KEYS if get(key) is not None}
    if get("weight") is not None:
        options["lambda"] = get("weight")
    return RunConfig(
        group=get("group"),
        preset=get("preset"),
        projector=get("projector"),
        cutoff=get("cutoff"),
        q=get("q") if get("q") is not None else 0.5,
        twists=get("twists"),
        kbox=get("kbox"),
        xs=get("xs"),
        degrees=get("degrees"),
        samples=get("samples"),
        seed=get("seed"),
        out=get("out"),
        verbosity=args.verbose - (1 if args.quiet else 0),
        options=options,
    )


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text + "\n")
    else:
        out.write_text(text + "\n", encoding="utf-8")
        _log.info("wrote %s", out)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point; returns 0 on success, 1 on check failures and 2 on usage errors."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"qorbifold: error: {exc}\n")
        return 2

    level = logging.WARNING
    if args.quiet:
        level = logging.ERROR
    elif args.verbose >= 2:
        level = logging.DEBUG
    elif args.verbose == 1:
        level = logging.INFO
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")

    try:
        config = _config(args)
        if args.command == "verify":
            report: Report = run_suite(args.suite, config)
            report.config.setdefault("run", config.to_dict())
            _emit(report.to_json(), config.out)
            return 0 if report.passed else 1
        result = compute(_subcommand(args), config)
    except QorbifoldException as exc:
        _log.error("%s", exc)
        return 2
    _emit(_to_json(result, sort_keys=True, indent=True), config.out)
    if isinstance(result.get("report"), dict) and not result["report"].get("passed", True):
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

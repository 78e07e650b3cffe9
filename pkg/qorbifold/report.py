from __future__ import annotations

from typing import Any, Dict, Iterable, List, Optional, TYPE_CHECKING
from fractions import Fraction

import logging
import time

from .scalars import QScalar
from .utils import _to_json

if TYPE_CHECKING:
    from .types.report import CheckPayload, ReportPayload

__all__ = ("Check", "Report", "jsonable")

_log = logging.getLogger(__name__)


def jsonable(value: Any) -> Any:
    """Convert exact and numeric values into plain JSON data."""
    if isinstance(value, QScalar):
        return str(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        return round(value, 12)
    if isinstance(value, complex):
        return [round(value.real, 12), round(value.imag, 12)]
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = [jsonable(v) for v in value]
        return sorted(items, key=repr) if isinstance(value, (set, frozenset)) else items
    if hasattr(value, "tolist"):
        return jsonable(value.tolist())
    if hasattr(value, "item"):
        return jsonable(value.item())
    return str(value)


class Check:
    """Outcome of a single verification.

    Attributes
    ----------
    name: :class:`str`
        Stable identifier of the check.
    passed: :class:`bool`
        Whether the identity held.
    witness: Optional[Dict[:class:`str`, Any]]
        Data exhibiting the failure, ``None`` on success.
    detail: Dict[:class:`str`, Any]
        Extra machine-readable data such as counts.
    """

    __slots__ = ("name", "passed", "witness", "detail")

    def __init__(self, name: str, passed: bool, witness: Optional[Dict[str, Any]] = None, detail: Optional[Dict[str, Any]] = None) -> None:
        self.name = name
        self.passed = bool(passed)
        self.witness = None if passed else witness
        self.detail = detail or {}

    def to_dict(self) -> CheckPayload:
        return {
            "name": self.name,
            "passed": self.passed,
            "witness": jsonable(self.witness) if self.witness is not None else None,
            "detail": jsonable(self.detail),
        }

    def __repr__(self) -> str:
        return f"<Check name={self.name!r} passed={self.passed}>"


class Report:
    """An ordered collection of :class:`Check` results for one suite.

    Attributes
    ----------
    suite: :class:`str`
        Suite name.
    checks: List[:class:`Check`]
        Results in the order they were recorded.
    notes: List[:class:`str`]
        Free-form remarks, for example surfaced convention discrepancies.
    config: Dict[:class:`str`, Any]
        Configuration echoed into the JSON output.
    """

    __slots__ = ("suite", "checks", "notes", "config", "timing", "_started")

    def __init__(self, suite: str, config: Optional[Dict[str, Any]] = None) -> None:
        self.suite = suite
        self.checks: List[Check] = []
        self.notes: List[str] = []
        self.config: Dict[str, Any] = dict(config or {})
        self.timing: Dict[str, float] = {}
        self._started = time.perf_counter()

    def check(self, name: str, passed: bool, witness: Optional[Dict[str, Any]] = None, **detail: Any) -> bool:
        result = Check(name, passed, witness, detail)
        self.checks.append(result)
        if not result.passed:
            _log.debug("%s: check %s failed with %r", self.suite, name, witness)
        return result.passed

    def note(self, text: str) -> None:
        self.notes.append(text)

    def extend(self, other: Report, prefix: Optional[str] = None) -> None:
        for c in other.checks:
            name = f"{prefix}/{c.name}" if prefix else c.name
            self.checks.append(Check(name, c.passed, c.witness, c.detail))
        self.notes.extend(other.notes)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> List[Check]:
        return [c for c in self.checks if not c.passed]

    def names(self) -> Iterable[str]:
        return (c.name for c in self.checks)

    def get(self, name: str) -> Optional[Check]:
        for c in self.checks:
            if c.name == name:
                return c
        return None

    def finish(self) -> Report:
        self.timing["elapsed_seconds"] = round(time.perf_counter() - self._started, 3)
        return self

    def to_dict(self) -> ReportPayload:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "config": jsonable(self.config),
            "checks": [c.to_dict() for c in self.checks],
            "notes": list(self.notes),
            "timing": dict(self.timing),
        }

    def to_json(self, *, indent: bool = True) -> str:
        return _to_json(self.to_dict(), sort_keys=True, indent=indent)

    def __repr__(self) -> str:
        failed = len(self.failures())
        return f"<Report suite={self.suite!r} checks={len(self.checks)} failed={failed}>"

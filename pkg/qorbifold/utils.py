from __future__ import annotations

from typing import Any, Callable, List, Optional, TypeVar
from fractions import Fraction
from pathlib import Path

import json
import os

try:
    import orjson
except ModuleNotFoundError:
    ORJSON = False
else:
    ORJSON = True

from .errors import UsageError

__all__ = (
    "_to_json",
    "_JSON_LOADER",
    "CACHE_ENV",
    "copy_doc",
    "cache_dir",
    "parse_fraction",
    "parse_int_list",
    "parse_int_range",
)

F = TypeVar("F", bound=Callable[..., Any])

CACHE_ENV: str = "QORB_CACHE_DIR"

if ORJSON:

    def _to_json(obj: Any, *, sort_keys: bool = False, indent: bool = False) -> str:
        option = 0
        if sort_keys:
            option |= orjson.OPT_SORT_KEYS
        if indent:
            option |= orjson.OPT_INDENT_2
        return orjson.dumps(obj, option=option).decode("utf-8")  # type: ignore

    _JSON_LOADER = orjson.loads  # type: ignore
else:

    def _to_json(obj: Any, *, sort_keys: bool = False, indent: bool = False) -> str:
        if indent:
            return json.dumps(obj, sort_keys=sort_keys, indent=2, ensure_ascii=True)
        return json.dumps(obj, separators=(",", ":"), sort_keys=sort_keys, ensure_ascii=True)

    _JSON_LOADER = json.loads


def copy_doc(target: Any) -> Callable[[F], F]:
    def decorator(overridden: F) -> F:
        overridden.__doc__ = target.__doc__
        return overridden

    return decorator


def cache_dir() -> Optional[Path]:
    """Directory for persisted Clebsch-Gordan data, or ``None`` when unset."""
    value = os.environ.get(CACHE_ENV)
    if not value:
        return None
    path = Path(value).expanduser()
    path.mkdir(parents=True, exist_ok=True)
    return path


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {text!r}") from None


def parse_int_list(text: str) -> List[int]:
    """Parse ``"0,1,2"`` or a range ``"0..3"`` into a list of integers."""
    if ".." in text:
        return parse_int_range(text)
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise UsageError(f"not an integer list: {text!r}") from None


def parse_int_range(text: str) -> List[int]:
    start, sep, stop = text.partition("..")
    if not sep:
        raise UsageError(f"not a range: {text!r}")
    try:
        lo, hi = int(start), int(stop)
    except ValueError:
        raise UsageError(f"not an integer range: {text!r}") from None
    if hi < lo:
        raise UsageError(f"empty range: {text!r}")
    return list(range(lo, hi + 1))

from __future__ import annotations

from fractions import Fraction

import pytest

from qorbifold import UsageError
from qorbifold.utils import CACHE_ENV, _JSON_LOADER, _to_json, cache_dir, parse_fraction, parse_int_list


def test_parse_fraction():
    assert parse_fraction(" 3/4 ") == Fraction(3, 4)
    assert parse_fraction("-2") == Fraction(-2)
    for bad in ("x", "1/0", ""):
        with pytest.raises(UsageError):
            parse_fraction(bad)


def test_parse_int_list():
    assert parse_int_list("0,1,2") == [0, 1, 2]
    assert parse_int_list("3,") == [3]
    assert parse_int_list("-2..1") == [-2, -1, 0, 1]
    for bad in ("a,b", "3..1", "1..x"):
        with pytest.raises(UsageError):
            parse_int_list(bad)


def test_cache_dir(tmp_path, monkeypatch):
    assert cache_dir() is None
    target = tmp_path / "nested" / "cache"
    monkeypatch.setenv(CACHE_ENV, str(target))
    assert cache_dir() == target
    assert target.is_dir()


def test_json_helpers():
    text = _to_json({"b": 1, "a": [1, "2"]}, sort_keys=True)
    assert text.index('"a"') < text.index('"b"')
    assert _JSON_LOADER(text) == {"a": [1, "2"], "b": 1}

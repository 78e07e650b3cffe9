from __future__ import annotations

import os

import pytest
from hypothesis import HealthCheck, settings

from qorbifold import CoordAlgebra, QScalar

settings.register_profile("default", max_examples=50, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", parent=settings.get_profile("default"), deadline=None)
settings.register_profile("dev", max_examples=10, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def su2():
    return CoordAlgebra("su2", cutoff=4)


@pytest.fixture(scope="session")
def su3():
    return CoordAlgebra("su3", cutoff=2)


@pytest.fixture(scope="session")
def s():
    return QScalar.s_power(1)


@pytest.fixture(autouse=True)
def _no_cache(monkeypatch):
    monkeypatch.delenv("QORB_CACHE_DIR", raising=False)

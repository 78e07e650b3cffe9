__title__ = "qorbifold"
__author__ = "qorbifold developers"
__license__ = "MIT"
__copyright__ = "Copyright 2026-present qorbifold developers"
__version__ = "0.4.0"

from typing import Literal, NamedTuple

from .errors import *
from .scalars import *
from .linalg import *
from .repcat import *
from .coordalg import *
from .orbifold import *
from .crossedprod import *
from .spin import *
from .equivariant import *
from .report import *
from .suites import *

_VersionInfo = NamedTuple(
    "_VersionInfo",
    major=int,
    minor=int,
    micro=int,
    releaselevel=Literal["alpha", "beta", "candidate", "final"],
    serial=int,
)

version_info = _VersionInfo(major=0, minor=4, micro=0, releaselevel="beta", serial=0)

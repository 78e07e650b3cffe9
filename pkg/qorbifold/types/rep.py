from typing import Dict, List, Literal, Tuple, TypedDict

from .scalar import ScalarPayload

__all__ = ("GeneratorName", "SparseEntry", "RepPayload", "CGEntry")

GeneratorName = Literal["e", "f", "k"]
SparseEntry = Tuple[int, int, ScalarPayload]


class RepPayload(TypedDict):
    root_datum: str
    dimension: int
    weights: List[List[int]]
    # "e1", "f2", "k1" -> sparse entries
    generators: Dict[str, List[SparseEntry]]


class CGEntry(TypedDict):
    left: List[int]
    right: List[int]
    summand: List[int]
    m: int
    m_prime: int
    k: int
    value: ScalarPayload

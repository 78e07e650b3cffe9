from typing import List, TypedDict

from .scalar import ScalarPayload

__all__ = ("CoordTerm", "CoordPayload", "TensorTerm", "ChainPayload")


class CoordTerm(TypedDict):
    # highest weight and 0-based row/column labels
    weight: List[int]
    mu: int
    nu: int
    scalar: ScalarPayload


CoordPayload = List[CoordTerm]


class TensorTerm(TypedDict):
    # one entry per tensor factor: weight coordinates, then row and column
    factors: List[List[int]]
    charges: List[List[str]]
    total_charge: List[str]
    scalar: ScalarPayload


class ChainPayload(TypedDict):
    degree: int
    action: str
    invariant: bool
    terms: List[TensorTerm]

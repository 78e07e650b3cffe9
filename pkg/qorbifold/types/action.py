from typing import List, Literal, Optional, TypedDict

__all__ = ("FactorKind", "FactorPayload", "ActionPayload", "CertificatePayload")

FactorKind = Literal["T", "Z"]


class FactorPayload(TypedDict):
    kind: FactorKind
    order: Optional[int]
    # rationals written "p/q"
    y1: List[str]
    y2: List[str]


class ActionPayload(TypedDict):
    name: str
    group: str
    center: int
    factors: List[FactorPayload]


class CertificatePayload(TypedDict, total=False):
    valid: bool
    fundamental: List[int]
    mu: List[int]
    nu: List[int]
    factor: int
    charge: str
    central_residue: List[int]

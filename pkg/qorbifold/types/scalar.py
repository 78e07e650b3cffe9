from typing import List, Tuple, TypedDict, Union

__all__ = ("Coefficient", "CoeffExponent", "ScalarTerm", "ScalarPayload")

# an integer, or a rational written "p/q"
Coefficient = Union[int, str]
CoeffExponent = Tuple[Coefficient, int]


class _ScalarTermBase(TypedDict):
    num: List[CoeffExponent]
    den: List[CoeffExponent]
    radicand: List[CoeffExponent]
    zeta: int


class ScalarTerm(_ScalarTermBase, total=False):
    order: int


ScalarPayload = List[ScalarTerm]

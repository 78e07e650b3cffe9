from typing import Any, Dict, List, Optional, TypedDict

__all__ = ("CheckPayload", "ReportPayload")


class CheckPayload(TypedDict):
    name: str
    passed: bool
    witness: Optional[Dict[str, Any]]
    detail: Dict[str, Any]


class ReportPayload(TypedDict):
    suite: str
    passed: bool
    config: Dict[str, Any]
    checks: List[CheckPayload]
    notes: List[str]
    timing: Dict[str, float]

from __future__ import annotations

from typing import Any, Optional, Sequence

__all__ = (
    "QorbifoldException",
    "ScalarError",
    "ScalarDivisionError",
    "UnrepresentableSqrt",
    "PoleAtOne",
    "EvaluationError",
    "RepresentationError",
    "UnknownRepresentation",
    "RootDatumMismatch",
    "NotASummand",
    "CutoffOverflow",
    "WordLengthExceeded",
    "ActionError",
    "IrrationalAngle",
    "GroupMismatch",
    "InvalidPreset",
    "ProjectorError",
    "NotAnIsometry",
    "DegreeMismatch",
    "SpinError",
    "NoChirality",
    "UsageError",
)


class QorbifoldException(Exception):
    """Base exception class for qorbifold"""

    pass


class ScalarError(QorbifoldException):
    """Exception that's raised when an operation on :class:`QScalar` fails.

    Subclass of :exc:`QorbifoldException`
    """

    pass


class ScalarDivisionError(ScalarError, ZeroDivisionError):
    """Exception that's raised when inverting a zero scalar.

    Subclass of :exc:`ScalarError` and :exc:`ZeroDivisionError`
    """

    pass


class UnrepresentableSqrt(ScalarError):
    """Exception that's raised when a square root leaves the radical tower.

    Subclass of :exc:`ScalarError`

    Attributes
    ----------
    value: :class:`str`
        Printable form of the rejected radicand.
    """

    def __init__(self, value: Any, reason: str = "not a single-term scalar") -> None:
        self.value: str = str(value)
        super().__init__(f"cannot take square root of {self.value}: {reason}")


class PoleAtOne(ScalarError):
    """Exception that's raised when a classical limit meets a pole at ``s = 1``.

    Subclass of :exc:`ScalarError`
    """

    pass


class EvaluationError(ScalarError):
    """Exception that's raised by numeric evaluation outside its domain.

    Subclass of :exc:`ScalarError`
    """

    pass


class RepresentationError(QorbifoldException):
    """Base exception for representation-category failures.

    Subclass of :exc:`QorbifoldException`
    """

    pass


class UnknownRepresentation(RepresentationError):
    """Exception that's raised for an unknown built-in module name.

    Subclass of :exc:`RepresentationError`
    """

    pass


class RootDatumMismatch(RepresentationError):
    """Exception that's raised when combining modules of different root data.

    Subclass of :exc:`RepresentationError`
    """

    pass


class NotASummand(RepresentationError):
    """Exception that's raised when a highest weight is absent from a decomposition.

    Subclass of :exc:`RepresentationError`
    """

    pass


class CutoffOverflow(QorbifoldException):
    """Exception that's raised when a computation leaves the weight cutoff.

    Attributes
    ----------
    weight: Tuple[:class:`int`, ...]
        The dominant weight that exceeded the cutoff.
    cutoff: :class:`int`
        The maximal coordinate allowed.
    """

    def __init__(self, weight: Sequence[int], cutoff: int) -> None:
        self.weight = tuple(weight)
        self.cutoff = cutoff

        fmt = "weight {0} exceeds cutoff {1} (max coordinate)"
        super().__init__(fmt.format(self.weight, self.cutoff))


class WordLengthExceeded(QorbifoldException):
    """Exception that's raised when a generator word is longer than allowed.

    Subclass of :exc:`QorbifoldException`
    """

    pass


class ActionError(QorbifoldException):
    """Base exception for orbifold action failures.

    Subclass of :exc:`QorbifoldException`
    """

    pass


class IrrationalAngle(ActionError):
    """Exception that's raised when a circle angle is not an exact rational turn.

    Subclass of :exc:`ActionError`
    """

    pass


class GroupMismatch(ActionError):
    """Exception that's raised when crossed elements live over different actions.

    Subclass of :exc:`ActionError`
    """

    pass


class InvalidPreset(ActionError):
    """Exception that's raised for a malformed or unknown preset string.

    Subclass of :exc:`ActionError`

    Attributes
    ----------
    preset: :class:`str`
        The rejected preset.
    """

    def __init__(self, preset: str, reason: Optional[str] = None) -> None:
        self.preset = preset
        message = f"invalid preset {preset!r}"
        if reason:
            message += f": {reason}"
        super().__init__(message)


class ProjectorError(QorbifoldException):
    """Base exception for projector and chain failures.

    Subclass of :exc:`QorbifoldException`
    """

    pass


class NotAnIsometry(ProjectorError):
    """Exception that's raised when a corepresentation column fails ``v* v = 1``.

    Subclass of :exc:`ProjectorError`
    """

    pass


class DegreeMismatch(ProjectorError):
    """Exception that's raised when pairing a cochain and a chain of different degree.

    Subclass of :exc:`ProjectorError`
    """

    pass


class SpinError(QorbifoldException):
    """Base exception for spinor module and spin lift failures.

    Subclass of :exc:`QorbifoldException`
    """

    pass


class NoChirality(SpinError):
    """Exception that's raised when asking for a grading of an odd-dimensional Clifford module.

    Subclass of :exc:`SpinError`
    """

    pass


class UsageError(QorbifoldException):
    """Exception that's raised for invalid command-line usage.

    Subclass of :exc:`QorbifoldException`
    """

    pass

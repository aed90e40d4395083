"""Exception hierarchy shared by every cyclograph module."""

from __future__ import annotations


class CyclographError(Exception):
    """Base class for all library errors."""


class InvalidParameterError(CyclographError, ValueError):
    pass


class ZeroIdealError(InvalidParameterError):
    pass


class UnitIdealError(InvalidParameterError):
    pass


class TheoremRangeError(InvalidParameterError):
    """Inputs fall outside the hypotheses under which a theorem check applies."""


class HypothesisViolationError(InvalidParameterError):
    def __init__(self, condition: str, detail: str = "") -> None:
        self.condition = condition
        msg = f"hypothesis violated: {condition}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class ResourceLimitError(CyclographError):
    pass


class InternalInconsistencyError(CyclographError):
    """A computed certificate disagreed with a proven structural fact."""

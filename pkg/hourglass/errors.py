"""
Exception hierarchy for the hourglass toolkit.

Every error raised by the engine derives from HourglassError so the CLI can
map the whole family to exit code 2 in one place.

=== POSITIONS ===

Errors that originate in text (formula expressions, scenario files) carry a
1-based ``line`` and ``column`` plus the offending token or name. Errors
raised by the programmatic API (e.g. asking for the image of an undeclared
spec) leave the position empty.
"""

from typing import Optional


class HourglassError(Exception):
    """Base class for all toolkit errors."""

    def __init__(
        self,
        message: str,
        *,
        name: Optional[str] = None,
        line: Optional[int] = None,
        column: Optional[int] = None,
    ):
        self.message = message
        self.name = name
        self.line = line
        self.column = column
        super().__init__(self.__str__())

    def __str__(self) -> str:
        if self.line is None:
            return self.message
        return f"{self.line}:{self.column}: {self.message}"


class ParseError(HourglassError):
    """Malformed formula expression or scenario text."""


class UnknownAtom(HourglassError):
    def __init__(self, name: str, **kwargs):
        super().__init__(f"unknown atom '{name}'", name=name, **kwargs)


class UnknownSpec(HourglassError):
    def __init__(self, name: str, **kwargs):
        super().__init__(f"unknown specification '{name}'", name=name, **kwargs)


class UnknownProgram(HourglassError):
    def __init__(self, name: str, **kwargs):
        super().__init__(f"unknown program '{name}'", name=name, **kwargs)


class DuplicateName(HourglassError):
    def __init__(self, name: str, kind: str = "name", **kwargs):
        super().__init__(f"duplicate {kind} '{name}'", name=name, **kwargs)


class ForwardReference(HourglassError):
    def __init__(self, name: str, kind: str = "name", **kwargs):
        super().__init__(
            f"{kind} '{name}' is used before its declaration", name=name, **kwargs
        )


class DuplicateValue(HourglassError):
    def __init__(self, name: str, what: str = "value", **kwargs):
        super().__init__(f"{what} for '{name}' is declared twice", name=name, **kwargs)


class DuplicateNecessary(HourglassError):
    def __init__(self, **kwargs):
        super().__init__("at most one 'necessary' block is allowed", name="necessary", **kwargs)


class VocabularyTooLarge(HourglassError):
    def __init__(self, size: int, limit: int, purpose: str = "exhaustive checking", **kwargs):
        self.size = size
        self.limit = limit
        super().__init__(
            f"vocabulary of {size} atoms exceeds the limit of {limit} for {purpose}",
            **kwargs,
        )


class InvalidUniverse(HourglassError):
    """A universe whose cross-references do not resolve."""

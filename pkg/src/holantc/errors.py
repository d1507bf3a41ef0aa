"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class HolantError(Exception):
    """Base class for all errors raised by holantc."""


class ParseError(HolantError):
    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DuplicateEntry(ParseError):
    pass


class ValueOutsideRing(ParseError):
    """A constant that is not an element of Q(zeta_8)."""


class UnknownSignature(ParseError):
    pass


class EmptySupport(HolantError):
    pass


class NotAffine(HolantError):
    pass


class NotUnimodular(HolantError):
    """Some ratio f(x)/f(x0) on the support is not a power of alpha."""


class BundleViolation(HolantError):
    pass


class MalformedGrid(HolantError):
    def __init__(self, message: str, port: tuple[int, int] | None = None) -> None:
        self.port = port
        super().__init__(message)


class TooLarge(HolantError):
    pass


class NotInClass(HolantError):
    def __init__(self, message: str, vertex: int | None = None) -> None:
        self.vertex = vertex
        super().__init__(message)


class NotRealValued(HolantError):
    pass

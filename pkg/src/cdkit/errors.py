"""Exception hierarchy shared by every cdkit module."""

from __future__ import annotations


class CDKitError(Exception):
    """Base class for all library errors."""


class CapExceeded(CDKitError):
    """A size budget (element cap, subgroup count, search nodes) was exceeded."""

    def __init__(self, what: str, limit: int):
        super().__init__(f"{what} exceeded cap of {limit}")
        self.what = what
        self.limit = limit


class DegreeMismatch(CDKitError):
    pass


class InvalidParameters(CDKitError):
    pass


class ParentMismatch(CDKitError):
    pass


class NoSuchPrime(CDKitError):
    pass


class NotAGroup(CDKitError):
    """Raised by table validation with the violated axiom and a witness tuple."""

    def __init__(self, axiom: str, witness: tuple):
        super().__init__(f"not a group: {axiom} fails at {witness}")
        self.axiom = axiom
        self.witness = witness


class ParseError(CDKitError):
    def __init__(self, message: str, line: int | None = None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")
        self.line = line

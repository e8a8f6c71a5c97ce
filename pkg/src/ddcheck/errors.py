"""Exception types shared across the package."""

from __future__ import annotations


class DdcheckError(Exception):
    """Base class for all errors raised by this package."""


class InvalidPositionError(DdcheckError):
    """A position does not address a subterm of the given term."""


class SignatureError(DdcheckError):
    """A function symbol is used with more than one arity."""


class ParseError(DdcheckError):
    """Malformed textual input (TRS or ARS file)."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = "" if line is None else f" at line {line}" + ("" if column is None else f", column {column}")
        super().__init__(message + where)


class CertificateFormatError(DdcheckError):
    """A certificate document violates the JSON schema."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


class WrongPeakKindError(DdcheckError):
    """A join routine was applied to a peak of the wrong kind."""


class UnsupportedPeakError(DdcheckError):
    """Variable peak whose outer rule is not left-linear."""


class UnknownRuleError(DdcheckError):
    """A step uses a rule that is not part of the rewrite system."""


class UninterpretedSymbolError(DdcheckError):
    """A term contains a symbol the interpretation does not cover."""


class OrderError(DdcheckError):
    """Label orders that are cyclic or not compatible."""

    def __init__(self, message: str, witness: tuple | None = None):
        self.witness = witness
        super().__init__(message if witness is None else f"{message} (witness: {witness})")


class ResourceExhaustedError(DdcheckError):
    """A bounded search hit its node cap before finishing."""

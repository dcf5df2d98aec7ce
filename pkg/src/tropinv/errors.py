"""Exception hierarchy.  Each class carries the CLI exit code it maps to."""

from __future__ import annotations


class TropinvError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class InputError(TropinvError):
    """Malformed or inadmissible input (exit code 2)."""

    exit_code = 2


class ParseError(InputError):
    """Text that does not follow the element grammar.

    ``line`` and ``column`` are 1-based; ``line`` is ``None`` when the text
    did not come from a file.
    """

    def __init__(self, message: str, column: int, line: int | None = None):
        self.column = column
        self.line = line
        where = f"column {column}" if line is None else f"line {line}, column {column}"
        super().__init__(f"{message} at {where}")


class ModelMismatchError(InputError):
    """Operands live in different field models (or p-adic with different primes)."""


class DomainError(InputError):
    """An operation was applied outside its domain of definition."""


class NotSeparableError(DomainError):
    """The polynomial has a repeated root."""


class CapabilityError(TropinvError):
    """The request exceeds a documented cost guard (exit code 3)."""

    exit_code = 3


class InconsistencyError(TropinvError):
    """An internal cross-check failed (exit code 4)."""

    exit_code = 4

"""Exception hierarchy shared by the library and the command line.

Each class carries the process exit code the CLI maps it to.
"""

from __future__ import annotations


class FedinvError(Exception):
    exit_code = 1


class InvalidInputError(FedinvError, ValueError):
    """Malformed user input: bad structure file, bad point, unknown scheme."""

    exit_code = 1


class PolynomialSyntaxError(InvalidInputError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


class UnknownVariableError(InvalidInputError):
    def __init__(self, name: str, position: int):
        self.name = name
        self.position = position
        super().__init__(f"unknown variable {name!r} at position {position}")


class ShapeError(InvalidInputError):
    pass


class MembershipError(InvalidInputError):
    """A tensor handed to an operation is not in the subspace it must live in."""


class StructureError(InvalidInputError):
    """A Fedosov structure failed validation.

    ``issues`` is a list of dicts, one per failed check, each holding at least
    ``check`` and ``message``; compatibility failures also carry ``indices``
    (1-based) and the nonzero ``residual`` polynomial.
    """

    def __init__(self, issues: list[dict]):
        self.issues = issues
        lines = "; ".join(issue["message"] for issue in issues)
        super().__init__(f"invalid Fedosov structure: {lines}")


class CapExceededError(FedinvError):
    exit_code = 2

    def __init__(self, message: str, **details):
        self.details = details
        super().__init__(message)


class InvariantViolation(FedinvError):
    """Internal consistency check failed; indicates a bug, never user error."""

    exit_code = 3

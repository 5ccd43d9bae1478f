"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: ``DomainError`` and ``SizeError`` are
precondition violations (exit 2), ``InvariantError`` signals that an exact
identity failed at runtime (exit 3).
"""


class GaussRigError(Exception):
    pass


class DomainError(GaussRigError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class SizeError(GaussRigError, ValueError):
    """An input exceeds a memory/time guard."""


class UsageError(GaussRigError, ValueError):
    """Inputs are individually valid but inconsistent with each other."""


class NotFoundError(GaussRigError, LookupError):
    """A bounded search finished without a hit."""

    def __init__(self, message, deepest=None):
        super().__init__(message)
        self.deepest = deepest


class InvariantError(GaussRigError, RuntimeError):
    """An exact identity or tolerance check failed."""

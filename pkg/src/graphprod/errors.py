"""Exceptions shared across the package."""


class GuardExceeded(ValueError):
    """A desk-scale search limit was hit; the answer is not approximated."""


class VerificationError(RuntimeError):
    """A computed certificate failed its own check (an implementation bug)."""


class PreconditionError(ValueError):
    """Structural precondition of an algorithm does not hold."""

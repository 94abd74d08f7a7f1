"""Shared exception types."""


class UsageError(ValueError):
    """Operands that cannot be combined (e.g. mismatched moduli or algebras)."""


class SpecFileError(ValueError):
    """Malformed or inconsistent algebra/module spec file."""


class GuardExceeded(RuntimeError):
    """A brute-force search space exceeded its configured guard."""

"""Exception hierarchy shared across the package."""


class PNSpaceError(Exception):
    """Base class for all package errors."""


class DomainError(PNSpaceError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class ConstructionError(PNSpaceError, ValueError):
    """An object cannot be built because a structural hypothesis fails.

    Carries an optional ``witness`` describing where the hypothesis breaks.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class PreconditionError(PNSpaceError, RuntimeError):
    """A theorem-level hypothesis required by a check does not hold.

    ``hypothesis`` names the failed hypothesis so callers (and the CLI exit
    path) can report it.
    """

    def __init__(self, hypothesis, message=None, details=None):
        super().__init__(message or f"precondition failed: {hypothesis}")
        self.hypothesis = hypothesis
        self.details = details or {}


class ConfigError(PNSpaceError, ValueError):
    """A configuration document does not match the documented schema."""

"""Error taxonomy shared across the package."""


class QLatticeError(Exception):
    """Base class for all package-specific errors."""


class DomainError(QLatticeError, ValueError):
    """Inputs fall outside an operation's stated domain."""


class UnsupportedParametersError(DomainError):
    """Parameter combination the underlying statement explicitly excludes."""

    def __init__(self, message: str, clause: str = ""):
        super().__init__(message)
        self.clause = clause


class StructureError(QLatticeError, ValueError):
    """A family breaks a structural precondition (partition cells, Gram input)."""


class ResourceLimitError(QLatticeError, RuntimeError):
    """A configured budget was exceeded (lattice size, factoring ceiling, search).

    ``partial`` carries whatever was computed before the budget ran out.
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial

"""Exception types shared across the package."""


class DomainError(ValueError):
    """Kernel, measure or argument outside the supported domain."""


class ConvergenceError(RuntimeError):
    """An iterative solver failed on every attempt."""


class InvariantViolation(RuntimeError):
    """A mathematical consistency check failed, indicating a numerical bug."""

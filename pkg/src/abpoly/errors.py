"""Exception types shared across the package."""


class DimensionMismatch(ValueError):
    """Operands live in different ambient dimensions."""


class InvariantViolation(ValueError):
    """A constructed object failed one of its structural invariants."""


class BudgetExceeded(RuntimeError):
    """A state-space sweep hit its configured size cap."""


class NoChainFound(RuntimeError):
    """No quadratic move chain connects the requested endpoints."""

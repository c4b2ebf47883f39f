"""Exceptions shared across the package."""


class DimensionMismatchError(ValueError):
    """A hash function, key set, or parameter block disagree on u, m, or n."""


class BudgetExceededError(RuntimeError):
    """An exhaustive enumeration would exceed the configured budget."""


class BoundNotApplicableError(ValueError):
    """A closed-form bound was requested outside its domain of validity."""


class PoolExhaustedError(RuntimeError):
    """A candidate pool ran out before the construction finished."""

"""Semantic exceptions shared across the package."""


class ValidationError(ValueError):
    """Input outside its documented domain (bad distribution, bad range, bad shape)."""


class BudgetError(RuntimeError):
    """A computation was refused because its estimated size exceeds the configured budget.

    The message always carries the size estimate so callers can decide how to
    shrink the request.
    """

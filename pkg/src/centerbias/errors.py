"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Invalid user-supplied configuration (unknown id, out-of-range value)."""


class BudgetExhausted(RuntimeError):
    """Raised by an objective handle once its evaluation budget is spent."""

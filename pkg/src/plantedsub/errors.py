"""Exception types shared across the package."""


class InvalidArgument(ValueError):
    pass


class DomainError(ValueError):
    """Raised when a formula is evaluated outside the set it is defined on."""


class ResourceLimitError(RuntimeError):
    """A combinatorial search exceeded its node budget.

    ``bound`` carries the budget that was attempted so callers can report it.
    """

    def __init__(self, message, bound=None):
        super().__init__(message)
        self.bound = bound

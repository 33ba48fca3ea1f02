"""Exception types shared across the package."""


class InvalidArgumentError(ValueError):
    """An argument violates a documented precondition."""


class UnsupportedInputError(ValueError):
    """The input is valid but outside what the routine handles (e.g. support wider than one period)."""


class SolverError(RuntimeError):
    """The linear-programming solver failed to reach optimality."""

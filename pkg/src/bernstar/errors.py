"""Exception types shared across the package."""


class InvalidArgument(ValueError):
    """A parameter violates a documented precondition."""


class DomainError(ValueError):
    """An abscissa falls outside the domain where the function is defined."""

    def __init__(self, message, point=None):
        super().__init__(message if point is None else f"{message} (x={point!r})")
        self.point = point


class EvaluationError(ArithmeticError):
    """An evaluator returned a non-finite value where a finite one is required."""

    def __init__(self, message, point=None):
        super().__init__(message if point is None else f"{message} (x={point!r})")
        self.point = point


class Unsupported(InvalidArgument):
    """The request is well-formed but outside the supported parameter range."""

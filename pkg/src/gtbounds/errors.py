"""Exception types shared across the package.

Domain problems (bad arguments, violated preconditions) are plain
``ValueError`` subclasses; failures of the computation itself derive from
``ArithmeticError`` so callers can tell them apart.
"""


class NonInvertibleSeriesError(ValueError):
    """Series has zero constant-free linear term (or nonzero constant)."""


class DegenerateConceptError(ValueError):
    """Concept output is (almost) constant, so its correlation cannot be normalized."""


class ConvergenceError(ArithmeticError):
    def __init__(self, message, partial=None, iterations=None):
        super().__init__(message)
        self.partial = partial
        self.iterations = iterations


class NoRootError(ArithmeticError):
    """f(1) < 1, so f(r) = 1 has no solution in (0, 1]."""

    def __init__(self, message, value_at_one=None):
        super().__init__(message)
        self.value_at_one = value_at_one

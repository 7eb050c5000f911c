class ValidationError(ValueError):
    """Input violates a documented invariant (shape, hermiticity, positivity...)."""


class NumericError(ArithmeticError):
    """A numerical routine failed to converge or produced unusable output."""

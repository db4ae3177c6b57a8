"""Exception types shared across the package."""


class SparseDivError(Exception):
    """Base class for all package-specific errors."""


class ZeroPolynomial(SparseDivError):
    """An operation that needs a nonzero polynomial received zero."""


class NotInvertible(SparseDivError):
    """A residue has no inverse modulo X^p - 1 (gcd is nonconstant)."""


class NotCoprime(SparseDivError):
    """A dilated divisor shares a factor with X^p - 1; the probe must be abandoned."""


class BudgetExceeded(SparseDivError):
    """A term budget was exhausted before the computation finished."""


class NonExactIntegerStep(SparseDivError):
    """Integer division hit a quotient coefficient that is not integral."""


class DivisionFailure(SparseDivError):
    """A randomized division attempt failed (retry or treat as a failed round)."""


class ParseError(SparseDivError):
    """Malformed polynomial file."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line

"""Exception hierarchy shared across the package."""


class ConicError(Exception):
    """Base class for all errors raised by conic_nf."""


class InvalidD(ConicError):
    """d is 0 or 1, which do not define a quadratic field."""


class NotSquarefree(ConicError):
    """d is divisible by a square > 1."""


class NotEuclidean(ConicError):
    """Operation needs a norm-Euclidean field (Q or d in {-1,-2,-3,-7,-11})."""


class AllZero(ConicError):
    """gcd of an all-zero list is undefined."""


class EvenPrime(ConicError):
    """Operation is restricted to odd prime ideals."""


class FactorizationFailed(ConicError):
    """Integer factorization exceeded the configured effort."""


class UndecidedError(ConicError):
    """A bounded search was exhausted without reaching a verdict."""


class NotPositiveDefinite(ConicError):
    """Gram matrix fed to LLL is not positive definite."""


class PellSearchExhausted(ConicError):
    """Bounded Pell search found no solution; raise the bounds to retry."""


class NotSolvable(ConicError):
    """Descent was invoked on an equation whose solvability re-check failed."""


class UnsupportedField(ConicError):
    """Holzer reduction only covers Q and the five Euclidean imaginary fields."""


class BezoutFailed(ConicError):
    """gcd(alpha0, beta0) does not divide c in the reduction Bezout step."""


class NotASolution(ConicError):
    """A triple claimed as a solution does not satisfy its equation."""


class BaseDegenerate(ConicError):
    """Parameterisation needs a base solution with z != 0."""


class PreconditionViolated(ConicError):
    """An exact precondition check failed."""


class ParseError(ConicError):
    """Element or corpus text does not match the wire grammar."""

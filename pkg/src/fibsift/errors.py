"""Exception hierarchy shared by all fibsift modules."""


class FibsiftError(Exception):
    """Base class for every error raised by this package."""


class NonUnitNegativePower(FibsiftError, ValueError):
    pass


class NotPrime(FibsiftError, ValueError):
    pass


class ResidueCharTwo(FibsiftError, ValueError):
    pass


class ZeroElement(FibsiftError, ValueError):
    pass


class BadModulus(FibsiftError, ValueError):
    pass


class BadCharacteristic(FibsiftError, ValueError):
    pass


class NotGoodReduction(FibsiftError, ValueError):
    pass


class BadIdeal(FibsiftError, ValueError):
    pass


class NoWitness(FibsiftError):
    """A sieve found no eliminating witness for some case."""

    def __init__(self, message, *, m=None, p=None):
        super().__init__(message)
        self.m = m
        self.p = p


class BadGcd(FibsiftError):
    def __init__(self, m, factors):
        super().__init__(f"m={m}: disallowed prime factors {sorted(factors)} survive")
        self.m = m
        self.factors = factors


class WitnessSearchExhausted(NoWitness):
    pass


class SearchExhausted(NoWitness):
    pass


class InsufficientPrimes(FibsiftError):
    pass


class InconsistentSystem(FibsiftError):
    """The stacked congruence system has no solution (an elimination)."""


class NotAlgebraicDescriptor(FibsiftError, ValueError):
    pass


class PreconditionViolated(FibsiftError, ValueError):
    def __init__(self, which, detail=""):
        super().__init__(f"precondition violated: {which}" + (f" ({detail})" if detail else ""))
        self.which = which


class PositivityFailed(FibsiftError):
    pass


class SmallY(FibsiftError, ValueError):
    pass


class Indeterminate(FibsiftError):
    """An interval comparison could not be decided at the working precision."""


class ConfigError(FibsiftError, ValueError):
    pass


class SchemaError(FibsiftError, ValueError):
    pass

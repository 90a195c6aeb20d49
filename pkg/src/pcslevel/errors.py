"""Exception types raised across the package."""


class PcsError(Exception):
    """Base class for all errors raised by pcslevel."""


class NonUnimodular(PcsError, ValueError):
    pass


class DimensionMismatch(PcsError, ValueError):
    pass


class ModulusMismatch(PcsError, ValueError):
    pass


class NonInvertibleGenerator(PcsError, ValueError):
    pass


class NotInAmbient(PcsError, ValueError):
    pass


class UnsupportedDegree(PcsError, ValueError):
    """Degree n <= 2, or an odd degree for a symplectic ambient."""


class UnsupportedDegreeParity(PcsError, ValueError):
    """Density testing in SL(n, Z) is only decided for odd n."""


class NotATransvection(PcsError, ValueError):
    pass


class WordNotInGroup(PcsError, IndexError):
    pass


class NonDivisor(PcsError, ValueError):
    pass


class EnvelopeError(PcsError):
    """A computation left the configured desk-scale envelope."""


class OrbitBudgetExceeded(EnvelopeError):
    pass


class FactorizationTooHard(EnvelopeError):
    pass


class Undecided(EnvelopeError):
    """Surjectivity modulo p could not be decided within the envelope."""

    def __init__(self, p, reason=""):
        self.p = p
        super().__init__(f"surjectivity mod {p} undecided: {reason}")


class NoTransvectionFound(EnvelopeError):
    pass


class SingularGram(PcsError, ValueError):
    pass


class NotDense(PcsError):
    pass


class ParseError(PcsError, ValueError):
    pass


class InvariantViolation(PcsError, AssertionError):
    """A computed level or delta value contradicts a proven law."""

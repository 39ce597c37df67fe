"""Exception types shared across the toolkit."""


class ModuliError(Exception):
    """Base class for all toolkit errors."""


class NotADiscriminant(ModuliError):
    """Input integer is not a negative discriminant (>= 0 or = 2,3 mod 4)."""


class DegenerateInput(ModuliError):
    """Two inputs that must be distinct are equal."""


class DomainError(ModuliError):
    """Argument outside the validity range of a bound or expansion."""


class PrecisionExhausted(ModuliError):
    """Escalation hit the precision cap before the target radius was met."""

    def __init__(self, message, prec_bits=None):
        super().__init__(message)
        self.prec_bits = prec_bits


class DegenerateDenominator(ModuliError):
    """A certified denominator interval contains zero."""


class ReconstructionFailed(ModuliError):
    """Rational reconstruction of a certified value failed at the cap."""


class NotInClassifiedList(ModuliError):
    """Discriminant pair is not among the classified cross-field pairs."""


class InvalidAlpha(ModuliError):
    """The coefficient alpha must be a nonzero rational."""

"""Exception types raised by the library."""


class QuakebendError(ValueError):
    pass


class IdentityElement(QuakebendError):
    """Raised when an operation needs a non-identity element."""


class DegenerateAxis(QuakebendError):
    """Raised when the two ends of an axis coincide."""


class BadMultiplier(QuakebendError):
    pass


class DegenerateVertex(QuakebendError):
    pass


class RadiusTooLarge(QuakebendError):
    pass


class BadGenus(QuakebendError):
    pass


class InvalidLength(QuakebendError):
    pass


class UnknownGenerator(QuakebendError, KeyError):
    pass


class UnknownLoop(QuakebendError, KeyError):
    pass


class NotLoxodromic(QuakebendError):
    pass


class InvalidFraming(QuakebendError):
    pass


class ParabolicLoop(QuakebendError):
    pass


class InconsistentAxes(QuakebendError):
    pass


class WeightNearPi(QuakebendError):
    pass

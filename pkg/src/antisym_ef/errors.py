"""Exception hierarchy shared by every module of the package."""


class AntisymError(Exception):
    """Base class for all errors raised by ``antisym_ef``."""


class NonHermitian(AntisymError, ValueError):
    pass


class NoConvergence(AntisymError, RuntimeError):
    pass


class InvalidState(AntisymError, ValueError):
    pass


class BadFactorIndex(AntisymError, IndexError):
    pass


class IndexOutOfRange(AntisymError, ValueError):
    pass


class DimensionTooLarge(AntisymError, ValueError):
    pass


class DimensionMismatch(AntisymError, ValueError):
    pass


class SupportLeakage(AntisymError, ValueError):
    pass


class NotUnitary(AntisymError, ValueError):
    pass


class ShapeMismatch(AntisymError, ValueError):
    pass


class NotPure(AntisymError, ValueError):
    pass


class NotIsometry(AntisymError, ValueError):
    pass


class RankMismatch(AntisymError, ValueError):
    pass


class NotAntisymShape(AntisymError, ValueError):
    pass


class TooManyFactors(AntisymError, ValueError):
    pass


class BoundViolation(AntisymError, AssertionError):
    """A proven inequality failed numerically; indicates a bug, not bad input."""

"""Exception types shared across the package."""


class TetraError(Exception):
    pass


class DivisionByZero(TetraError, ZeroDivisionError):
    pass


class EvaluationPole(TetraError):
    pass


class HalfPowerUnsupported(TetraError):
    pass


class BadVertex(TetraError, IndexError):
    pass


class NotReduced(TetraError, ValueError):
    pass


class SignIncoherent(TetraError):
    pass


class ShapeMismatch(TetraError, ValueError):
    pass


class NonInvertible(TetraError):
    pass


class InadmissibleSign(TetraError, ValueError):
    pass


class NoAffineSolution(TetraError):
    pass


class NotRealizable(TetraError):
    pass


class NonNilpotent(TetraError):
    pass


class NonConvergent(TetraError):
    pass


class UnsupportedVariant(TetraError, ValueError):
    pass


class PochhammerPole(TetraError):
    pass


class WindowTooSmall(TetraError):
    pass


class FixtureMissing(TetraError, FileNotFoundError):
    pass


class BadConfig(TetraError, ValueError):
    pass

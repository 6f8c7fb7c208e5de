"""Exception hierarchy shared by all modules."""


class GaborLabError(Exception):
    """Base class for every error raised by ugabor."""


# windows
class WindowError(GaborLabError, ValueError):
    """Invalid rational window specification."""


class DuplicatePole(WindowError):
    pass


class ImaginaryPoleParameter(WindowError):
    pass


class ZeroAmplitude(WindowError):
    pass


class NonpositiveMultiplicity(WindowError):
    pass


class OverflowRisk(WindowError):
    pass


class UnsupportedWindow(WindowError):
    pass


# universal set
class InvalidOverride(GaborLabError, ValueError):
    pass


# symbols
class NoncancellingDenominator(GaborLabError, ArithmeticError):
    """A q-rational expression that should be polynomial left a remainder.

    Signals an implementation bug, never a bad input.
    """


class PoleHit(GaborLabError, ValueError):
    pass


# operator / segments
class DegenerateXi(GaborLabError, ValueError):
    pass


class StructureViolation(GaborLabError, RuntimeError):
    pass


class ConfigError(GaborLabError, ValueError):
    pass


class InvalidBlock(GaborLabError, ValueError):
    pass


class NearDegenerate(GaborLabError, ValueError):
    pass


class CoalescedPoles(GaborLabError, ValueError):
    pass


# numerics
class NoConvergence(GaborLabError, ArithmeticError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ToleranceNotMet(GaborLabError, ArithmeticError):
    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error

"""Exception types raised across the package."""


class DeformGSPError(Exception):
    """Base class for every error raised by deform_gsp."""


class MalformedLine(DeformGSPError, ValueError):
    pass


class SelfLoop(DeformGSPError, ValueError):
    pass


class NegativeWeightInNonnegativeMode(DeformGSPError, ValueError):
    pass


class IndexOutOfRange(DeformGSPError, IndexError):
    pass


class WrongMode(DeformGSPError, ValueError):
    pass


class InvalidParams(DeformGSPError, ValueError):
    pass


class DimensionMismatch(DeformGSPError, ValueError):
    pass


class InvalidK(DeformGSPError, ValueError):
    pass


class ZeroReference(DeformGSPError, ValueError):
    pass


class NoFeasiblePoint(DeformGSPError, RuntimeError):
    pass


class UnstableStepSize(DeformGSPError, ValueError):
    pass


class NonpositivePrice(DeformGSPError, ValueError):
    pass


class UnknownPreset(DeformGSPError, ValueError):
    pass


class ConvergenceFailure(DeformGSPError, RuntimeError):
    pass

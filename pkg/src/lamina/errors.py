"""Exception types shared across the package."""


class LaminaError(ValueError):
    """Base class for every validation error raised by lamina."""


class WitnessError(LaminaError):
    """An error that carries the point (or chord) where a check failed."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


# quiver
class NonAlternating(LaminaError):
    pass


class MissingEndpoint(LaminaError):
    pass


class DuplicatePosition(LaminaError):
    pass


class EndpointIsSource(LaminaError):
    pass


class NotAdmissible(LaminaError):
    pass


class OutNotInSet(LaminaError):
    pass


class InAlreadyInSet(LaminaError):
    pass


# pwfn
class IllegalBoundaryJump(LaminaError):
    pass


class NonMonotoneBreakpoints(LaminaError):
    pass


class EmptyInterval(LaminaError):
    pass


# stability
class Cond1Violation(WitnessError):
    pass


class Cond2Violation(WitnessError):
    pass


class Cond3Violation(WitnessError):
    pass


class Cond4Violation(WitnessError):
    pass


class Cond5Violation(WitnessError):
    pass


class Cond6Violation(WitnessError):
    pass


class QuiverMismatch(LaminaError):
    pass


class FpcRequired(WitnessError):
    pass


# tilting
class ContextInvalid(LaminaError):
    pass


class OutOfDomain(LaminaError):
    pass


# lamination
class PresentationInvalid(LaminaError):
    pass


# finite
class ProblemCase(LaminaError):
    pass


class IndexOutOfRange(LaminaError):
    pass


class UnknownCase(LaminaError):
    pass


# character
class NonPositiveVariable(LaminaError):
    pass


class Divergent(LaminaError):
    pass

"""Exception hierarchy shared by every module of the package."""


class EllisLabError(Exception):
    """Base class for all package errors."""


class IllegalPoint(EllisLabError):
    pass


class RationalCut(EllisLabError):
    """A cut at a rational value is not a proper gap of Q."""


class NoArrow(EllisLabError):
    pass


class EmptySigma(EllisLabError):
    pass


class CarrierMismatch(EllisLabError):
    pass


class CapExceeded(EllisLabError):
    pass


class NotPartialMapMonoid(EllisLabError):
    pass


class NotAnIdeal(EllisLabError):
    pass


class IllegalObservation(EllisLabError):
    pass


class SpaceMismatch(EllisLabError):
    pass


class NotElementary(EllisLabError):
    pass


class NotMonotonePairs(EllisLabError):
    pass


class Inconsistent(EllisLabError):
    """The observation cannot be met by any element of the class."""


class UnwitnessableTarget(Inconsistent):
    """Only a limit element (never a single group element) meets the target."""


class PreconditionViolated(EllisLabError):
    pass

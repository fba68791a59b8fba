"""Exception hierarchy shared by all squeezelab modules."""


class SqueezeLabError(Exception):
    """Base class for every error raised by squeezelab."""


class InvalidParameterError(SqueezeLabError, ValueError):
    """Raised for non-finite or out-of-domain inputs."""


class TruncationError(SqueezeLabError):
    """A Fock-space cutoff cannot certify the requested accuracy.

    ``achieved`` carries the best bound reached before giving up and
    ``suggested_dim`` (when known) a cutoff likely to succeed.
    """

    def __init__(self, message, achieved=None, suggested_dim=None):
        super().__init__(message)
        self.achieved = achieved
        self.suggested_dim = suggested_dim


class DivergenceError(SqueezeLabError, ArithmeticError):
    """A closed form diverges because ``1 - |p_+|^2`` is numerically zero."""


class UndefinedMandelQError(SqueezeLabError, ArithmeticError):
    """Mandel's Q is undefined when the mean photon number vanishes."""


class UndefinedTransitionError(SqueezeLabError, ArithmeticError):
    """``x = M / L`` is undefined because ``L`` vanishes."""

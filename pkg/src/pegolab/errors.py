"""Exception hierarchy."""


class PegoLabError(ValueError):
    """Base class for all errors raised by pegolab."""


class EvaluationError(PegoLabError):
    """A function produced a non-finite sample."""


class PegoRejected(PegoLabError):
    """A function is not Laplace-Pego of the requested order at the grid resolution."""


class PreconditionError(PegoLabError):
    pass


class ScaleError(PegoLabError):
    """A scale parameter is out of range for the working grids."""


class ConfigurationError(PegoLabError):
    pass


class InvariantViolation(PegoLabError):
    """A numerically checked inequality failed."""


class DiagnosisRefused(PegoLabError):
    pass

"""Exception types shared across the package."""


class GibbsFactorError(Exception):
    """Base class for all package errors."""


class ModelError(GibbsFactorError):
    """A model file or matrix violates a structural requirement."""


class AdmissibilityError(GibbsFactorError):
    """A word, point or transition is not allowed by the incidence data."""


class FiberMismatchError(GibbsFactorError):
    """Two simplex points live on different fibers."""


class EvaluationRefused(GibbsFactorError):
    """Potential evaluation cannot proceed at the requested point.

    Carries the offending window as ``window`` (a pair of positions into
    the point) when the refusal is due to an all-zero row in a step matrix.
    """

    def __init__(self, message, window=None):
        super().__init__(message)
        self.window = window


class CertificationError(GibbsFactorError):
    """Uniform constants cannot be certified for this factor system."""

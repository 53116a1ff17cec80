"""Exception hierarchy for levyhomog."""


class LevyHomogError(Exception):
    """Base class for all package errors."""


class InvalidParameterError(LevyHomogError):
    """A model or kernel parameter violates its declared bounds."""


class UnsupportedOrderError(LevyHomogError):
    """Requested derivative order not available for this field."""


class QuadratureError(LevyHomogError):
    """A quadrature failed to reach its requested tolerance."""


class BracketingError(LevyHomogError):
    """Monotone root bracketing failed (tail evaluations inconsistent)."""


class NonConvergenceError(LevyHomogError):
    """A Cauchy criterion on successive approximations failed."""


class RegimeError(LevyHomogError):
    """Operation requested in the wrong scaling regime."""


class InsufficientHorizonError(LevyHomogError):
    """Path too short for the requested rescaling."""


class BlowUpError(LevyHomogError):
    """Simulated path left the configured envelope (mis-set coefficients)."""


class AssemblyError(LevyHomogError):
    """Discrete form failed its positivity / symmetry checks."""


class SolverError(LevyHomogError):
    """Linear solver breakdown or unacceptable residual."""


class ConfigError(LevyHomogError):
    """Experiment configuration invalid; message names the offending field."""

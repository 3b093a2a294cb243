"""Exception hierarchy for the atommaser package."""


class MaserError(Exception):
    """Base class for all numerical and configuration failures."""


class TruncationError(MaserError):
    """Fock-space hard cap reached before the stationary tail bound was met."""


class ConvergenceError(MaserError):
    """Eigensolver failed to reach the requested residual."""


class RouteDisagreementError(MaserError):
    """Independent computation routes disagree beyond tolerance.

    Carries both values so the caller can inspect the disagreement.
    """

    def __init__(self, message, value_a=None, value_b=None):
        super().__init__(message)
        self.value_a = value_a
        self.value_b = value_b


class SingularSystemError(MaserError):
    """Right-hand side not orthogonal to the stationary distribution."""


class StepUnderflowError(MaserError):
    """Adaptive exponential-action substep fell below the floor."""


class StateExplosionError(MaserError):
    """Simulated photon number exceeded the configured sanity ceiling."""


class InsensitiveDesignPointError(MaserError):
    """Count sensitivity vanishes at the design point; estimator undefined."""


class NoFiniteLikelihoodError(MaserError):
    """Log-likelihood is -inf over the whole search bracket."""


class SingularCovarianceError(MaserError):
    """Joint count covariance is not positive definite beyond tolerance."""


class UnsupportedObservationError(MaserError):
    """Observed channel set leaves a state-changing event unexplained."""


class ConfigError(MaserError):
    """Invalid command line or config-file input."""

"""Exception types shared across the package."""


class RidgeFrameError(Exception):
    """Base class for all package-specific errors."""


class InvalidInputError(RidgeFrameError, ValueError):
    """Empty or structurally unusable input."""


class InvalidParameterError(RidgeFrameError, ValueError):
    """Parameter outside its admissible range."""


class ResolutionError(RidgeFrameError):
    """Grid too coarse to represent the requested object."""


class DomainError(RidgeFrameError):
    """Evaluation requested outside the sampled domain."""


class NotAdmissibleError(RidgeFrameError):
    """Generator fails the wavelet admissibility integral."""


class SingularEvaluationError(RidgeFrameError):
    """Denominator vanished during a filter evaluation."""

    def __init__(self, message: str, gamma: float):
        super().__init__(message)
        self.gamma = gamma


class CoverageError(RidgeFrameError):
    """Quadrature window leaves too much mass uncovered."""


class PerpendicularWindowsError(RidgeFrameError):
    """Dual-pair construction needs non-perpendicular windows."""


class SetupError(RidgeFrameError):
    """Generator fails the multiscale setup conditions."""


class ConstructionError(RidgeFrameError):
    """A constructive search did not produce a valid object."""


class FormatError(RidgeFrameError):
    """Malformed or truncated file."""


class ConsistencyError(RidgeFrameError):
    """Mutually inconsistent inputs (e.g. table vs. sidecar)."""

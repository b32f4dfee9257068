"""Exception and warning types shared across the package."""


class ThetaPhaseError(Exception):
    """Base class for all package errors."""


class NonconvergentTau(ThetaPhaseError):
    """Theta series requested for a nome parameter with Im(tau) <= 0."""


class TruncationOverflow(ThetaPhaseError):
    """Theta series would need more terms than the configured hard cap."""


class DimensionMismatch(ThetaPhaseError):
    """Operands live in Hilbert spaces of different size."""


class ZeroCountMismatch(ThetaPhaseError):
    """Zero search did not isolate the expected number of zeros.

    Signals either a zero sitting on a subdivision boundary that the cell
    offset failed to avoid, or insufficient boundary resolution.
    """


class NonconvergedNewton(ThetaPhaseError):
    """Newton refinement of a zero did not converge within the iteration cap."""


class ConstraintViolation(ThetaPhaseError):
    """A zero set does not satisfy the cell zero-sum constraint."""


class NonGenericFiducial(ThetaPhaseError):
    """Fiducial state is (too close to) a position or momentum basis state."""


class ConfigError(ThetaPhaseError):
    """Invalid run configuration."""


class IoError(ThetaPhaseError):
    """File could not be read or written."""


class ParseError(ThetaPhaseError):
    """Input file is malformed; the message names the offending field."""


class TruncationLossWarning(UserWarning):
    """Coefficient support spilled past the lattice cutoff.

    ``args[0]`` is a message, ``lost_norm`` carries the squared norm that
    was dropped.
    """

    def __init__(self, message: str, lost_norm: float) -> None:
        super().__init__(message)
        self.lost_norm = lost_norm


class DegenerateLeadingCoefficientWarning(UserWarning):
    """Laurent polynomial had vanishing leading coefficients; degree reduced."""

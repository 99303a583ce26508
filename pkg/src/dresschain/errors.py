"""Exception types shared across the package.

Everything user-facing derives from DressChainError so the CLI can map
domain failures to a dedicated exit code.
"""


class DressChainError(Exception):
    """Base class for all domain errors raised by this package."""


class OrderTooLowError(DressChainError):
    """A jet does not carry enough derivatives for the requested operation."""


class DivisionByZeroSigmaError(DressChainError):
    """Third-order potential extraction requires sigma != 0 at the point."""


class EvenNError(DressChainError):
    """Closed chains are only defined for odd N."""


class UnsupportedNError(DressChainError):
    """Operation implemented for N = 3 only."""


class ComplexBranchError(DressChainError):
    """Negative discriminant: the spectral-curve branch is not real."""


class NegativeRadicandError(DressChainError):
    """Real-mode square root of a negative radicand."""


class ZeroEta3Error(DressChainError):
    """Potential extraction divides by eta3 = 0."""


class NotInRangeError(DressChainError):
    """Right-hand side has a component outside the range of ad_sigma."""


class SingularBError(DressChainError):
    """D xi has a component along the kernel (Cartan direction) of B."""


class SingularPhiError(DressChainError):
    """Lattice frame contains a non-invertible matrix."""


class SingularSigmaError(DressChainError):
    """Lattice sigma is singular where an inverse is required."""


class CFLViolationError(DressChainError):
    """Requested time step violates the CFL bound."""


class NonFiniteError(DressChainError):
    """Integration produced a non-finite state.

    Carries the last valid abscissa and the partial trajectory so callers
    can report how far the run got.
    """

    def __init__(self, message, last_x=None, trajectory=None):
        super().__init__(message)
        self.last_x = last_x
        self.trajectory = trajectory


class UsageError(DressChainError):
    """Invalid CLI flag or configuration value."""

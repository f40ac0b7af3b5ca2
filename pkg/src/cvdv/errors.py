"""Exception types shared across the toolkit."""


class CvdvError(Exception):
    """Base class for all toolkit errors."""


class BadArgument(CvdvError, ValueError):
    pass


class CutoffTooSmall(CvdvError):
    """Truncated Fock space cannot faithfully hold the requested state."""


class DimMismatch(CvdvError, ValueError):
    pass


class CutoffMismatch(DimMismatch):
    pass


class NotHermitian(CvdvError, ValueError):
    pass


class NotSymmetric(CvdvError, ValueError):
    pass


class NotSymplectic(CvdvError, ValueError):
    pass


class BasisMismatch(CvdvError, ValueError):
    pass


class BadParamDomain(BadArgument):
    pass


class ArityMismatch(CvdvError, ValueError):
    pass


class BadAxis(BadArgument):
    pass


class BadAlpha(BadArgument):
    pass


class BadDistribution(BadArgument):
    pass


class StepTooLarge(BadArgument):
    pass


class TooManyTerms(CvdvError):
    pass


class TooManyQubits(CvdvError, ValueError):
    pass


class DisconnectedGraph(CvdvError, ValueError):
    pass


class UnsupportedPair(CvdvError, ValueError):
    pass


class UnsupportedCode(CvdvError, ValueError):
    pass


class NoAncilla(CvdvError, ValueError):
    pass


class InfeasiblePolynomial(CvdvError, ValueError):
    pass


class SqueezeInsufficient(CvdvError, ValueError):
    pass


class SectorLeak(CvdvError):
    pass


class DimTooLarge(CvdvError, ValueError):
    pass


class LinearizationInvalid(UserWarning):
    """Digital homodyne linearization k*extent is out of range (warning)."""


class LeakageWarning(UserWarning):
    """State population near the Fock cutoff exceeds the soft threshold."""


class CircuitSyntaxError(CvdvError, ValueError):
    """Raised by the circuit-language parser with line/column context."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, col {column}: {message}"
        super().__init__(message)

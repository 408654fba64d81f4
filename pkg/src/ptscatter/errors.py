"""Exception hierarchy shared by all solver modules."""


class ScatteringError(Exception):
    """Base class for every error raised by ptscatter."""


class DimensionMismatch(ScatteringError, ValueError):
    pass


class InvalidStep(ScatteringError, ValueError):
    pass


class NonFinite(ScatteringError, ValueError):
    pass


class StepMismatch(ScatteringError, ValueError):
    pass


class LengthMismatch(ScatteringError, ValueError):
    pass


class UnsupportedM(ScatteringError, ValueError):
    pass


class BandViolation(ScatteringError, ValueError):
    """Energy (or phase) outside the open lattice band."""

    def __init__(self, message, value=None):
        super().__init__(message)
        self.value = value


class NearSingular(ScatteringError, ArithmeticError):
    """det T vanishes to working precision; corner coefficients undefined.

    This is a singularity of the (alpha, beta) parametrization only. The
    matching solver remains well posed there.
    """

    def __init__(self, message, det=None, phi=None):
        super().__init__(message)
        self.det = det
        self.phi = phi


class SpectralSingularity(ScatteringError, ArithmeticError):
    """Real-energy pole of the scattering amplitudes."""

    def __init__(self, message, phi=None):
        super().__init__(message)
        self.phi = phi


class DeterminantOverflow(ScatteringError, OverflowError):
    pass


class PersymmetryViolation(ScatteringError, ArithmeticError):
    """Corner entries of T^-1 break the PT (conjugate-persymmetric) structure."""


class DegreeBoundExceeded(ScatteringError, ValueError):
    pass

"""Exception and warning types shared across the package."""


class GxrError(Exception):
    """Base class for all errors raised by this package."""


class NonpositiveRadius(GxrError):
    """Disk radius must be strictly positive."""


class SimplicityViolation(GxrError):
    """Raised when radius**2 * |kappa| >= 1 (boundary no longer strictly convex)."""


class OutOfDisk(GxrError):
    """A point was requested outside the closed disk (beyond tolerance)."""


class TangentRay(GxrError):
    """Entry angle |alpha| >= pi/2: the ray does not enter the disk."""


class ResolutionTooLow(GxrError):
    """Grid resolution is insufficient for the requested spectral degree."""


class SingularOrigin(GxrError):
    """The radial limit of a pointwise operator did not stabilize at the origin."""


class FilterOverflow(GxrError):
    """A spectral multiplier exceeded the configured amplification bound."""


class ModelMismatch(GxrError):
    """Two objects built for different (kappa, radius) models were combined."""


class FileFormatError(GxrError):
    """A data file is corrupt or not in a recognized format."""


class KernelLeakWarning(UserWarning):
    """A sinogram carries noticeable energy outside the range of the transform."""


class InterpolationClampWarning(UserWarning):
    """Sample coordinates fell outside the stored grid and were clamped."""

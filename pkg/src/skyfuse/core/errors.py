"""
Exception hierarchy shared across skyfuse modules.

Module-specific errors (parse failures, corrupt containers, ...) subclass
SkyfuseError and live next to the code that raises them.
"""


class SkyfuseError(Exception):
    """Base class for every error raised by skyfuse."""

    pass


class UnreadableImage(SkyfuseError):
    """Raised when an image file is missing or cannot be decoded."""

    pass


class UnsupportedBitDepth(SkyfuseError):
    """Raised when an image is not 8 bits per channel."""

    pass


class SingularMatrix(SkyfuseError):
    """Raised when a homography (or its source matrix) is not invertible."""

    pass


class DimensionMismatch(SkyfuseError):
    """Raised when rasters that must share a shape do not."""

    pass


class DegeneratePose(SkyfuseError):
    """Raised when a camera pose cannot define a plane homography."""

    pass


class EmptySequence(SkyfuseError):
    """Raised when an operation needs at least one frame and got none."""

    pass

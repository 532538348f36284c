"""
Data types produced by the flux-tensor stage.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..core.errors import DimensionMismatch
from ..core.models import BinaryMask

DERIVATIVE_NAMES = ("Ix", "Iy", "It", "Ixt", "Iyt", "Itt")


def _frozen(array: np.ndarray) -> np.ndarray:
    out = np.array(array, dtype=np.float64, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class DerivativeStack:
    """The six Gaussian-derivative rasters of one window, at its center frame.

    Every raster has shape (height, width, channels). Spatial derivatives are
    per pixel, temporal ones per frame.
    """

    Ix: np.ndarray
    Iy: np.ndarray
    It: np.ndarray
    Ixt: np.ndarray
    Iyt: np.ndarray
    Itt: np.ndarray
    frame_index: int = 0
    valid: Optional[BinaryMask] = None

    def __post_init__(self) -> None:
        shape = np.shape(self.Ix)
        for name in DERIVATIVE_NAMES:
            array = _frozen(getattr(self, name))
            if array.shape != shape or array.ndim != 3:
                raise DimensionMismatch(f"{name} has shape {array.shape}, expected {shape}")
            if not np.all(np.isfinite(array)):
                raise ValueError(f"{name} contains non-finite values")
            object.__setattr__(self, name, array)
        if self.valid is not None and self.valid.shape != shape[:2]:
            raise DimensionMismatch("Validity mask does not match derivative rasters")

    @property
    def shape(self):
        return self.Ix.shape[:2]

    @property
    def channels(self) -> int:
        return int(self.Ix.shape[2])


@dataclass(frozen=True, eq=False)
class TraceField:
    """Per-pixel tensor trace, nonnegative, shape (height, width)."""

    values: np.ndarray
    frame_index: int = 0
    valid: Optional[BinaryMask] = None

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.float64, copy=True)
        if values.ndim != 2:
            raise ValueError(f"TraceField must be 2D, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("TraceField contains non-finite values")
        # box sums of squares can round a hair below zero
        np.maximum(values, 0.0, out=values)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        if self.valid is not None and self.valid.shape != values.shape:
            raise DimensionMismatch("Validity mask does not match trace field")

    @property
    def shape(self):
        return self.values.shape

    def peak(self) -> float:
        return float(self.values.max()) if self.values.size else 0.0


@dataclass(frozen=True)
class ThresholdResult:
    """A motion mask together with the threshold that produced it.

    Attributes:
        mask: Pixels with trace above the threshold (invalid pixels false)
        threshold: The threshold on the raw trace
        degenerate: True when the rule could not split the field (for
            example Otsu on a constant field); the mask is then all false
    """

    mask: BinaryMask
    threshold: float
    degenerate: bool = False


@dataclass(frozen=True)
class MotionResult:
    """Output of the sliding-window driver for one interior frame."""

    frame_index: int
    flux: TraceField
    structure: TraceField
    threshold: ThresholdResult
    flux_tensor: Optional[np.ndarray] = None
    structure_tensor: Optional[np.ndarray] = None

    @property
    def mask(self) -> BinaryMask:
        return self.threshold.mask

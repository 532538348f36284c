"""
Flux-tensor motion detection for skyfuse.

Gaussian-derivative filtering over a temporal window, the 3D structure
tensor trace, the color flux-tensor trace and thresholding into motion
masks.

Example:
    >>> from skyfuse.fluxtensor import motion_masks
    >>> results = motion_masks(stabilized_frames, SequenceConfig(), valid_masks)
    >>> results[0].mask.count()
"""

from .models import (
    DERIVATIVE_NAMES,
    DerivativeStack,
    TraceField,
    ThresholdResult,
    MotionResult,
)
from .derivatives import WindowTooShort, temporal_kernels, compute_derivatives
from .tensors import (
    box_integrate,
    structure_tensor_trace,
    color_flux_trace,
    full_structure_tensor,
    full_color_flux_tensor,
)
from .threshold import threshold_trace
from .motion import window_validity, motion_masks

__all__ = [
    "DERIVATIVE_NAMES",
    "DerivativeStack",
    "TraceField",
    "ThresholdResult",
    "MotionResult",
    "WindowTooShort",
    "temporal_kernels",
    "compute_derivatives",
    "box_integrate",
    "structure_tensor_trace",
    "color_flux_trace",
    "full_structure_tensor",
    "full_color_flux_tensor",
    "threshold_trace",
    "window_validity",
    "motion_masks",
]

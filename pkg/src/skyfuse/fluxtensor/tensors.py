"""
Structure-tensor and color flux-tensor traces.

Both tensors are outer products of a per-pixel 3-vector, summed over the
color channels and box-integrated over the (2r+1)^2 integration neighborhood:

- structure tensor: (I_x, I_y, I_t), responds to every edge
- color flux tensor: (I_xt, I_yt, I_tt), vanishes on static content

Only the traces are needed to classify motion. The full 3x3 fields are
available for inspection.
"""

import numpy as np
from scipy import ndimage

from ..core.models import SequenceConfig
from .models import DerivativeStack, TraceField


def box_integrate(values: np.ndarray, radius: int) -> np.ndarray:
    """Sum over the (2r+1)^2 window around each pixel, replicate-padded."""
    size = 2 * radius + 1
    return ndimage.uniform_filter(values, size=size, mode="nearest") * float(size * size)


def structure_tensor_trace(stack: DerivativeStack, config: SequenceConfig) -> TraceField:
    """
    trace(J): Σ_box Σ_c (I_x^2 + I_y^2 + I_t^2).

    Positive on static and moving edges alike.
    """
    energy = np.sum(stack.Ix**2 + stack.Iy**2 + stack.It**2, axis=2)
    return TraceField(
        box_integrate(energy, config.integration_radius),
        frame_index=stack.frame_index,
        valid=stack.valid,
    )


def color_flux_trace(stack: DerivativeStack, config: SequenceConfig) -> TraceField:
    """
    trace(J_FC): Σ_box Σ_c (I_xt^2 + I_yt^2 + I_tt^2).

    Channels are summed after squaring, so opposite-signed changes in
    different channels cannot cancel. A one-channel stack gives the plain
    flux-tensor trace.

    Example:
        >>> flux = color_flux_trace(stack, SequenceConfig())
        >>> bool((flux.values >= 0).all())
        True
    """
    energy = np.sum(stack.Ixt**2 + stack.Iyt**2 + stack.Itt**2, axis=2)
    return TraceField(
        box_integrate(energy, config.integration_radius),
        frame_index=stack.frame_index,
        valid=stack.valid,
    )


def _outer_field(gx: np.ndarray, gy: np.ndarray, gt: np.ndarray, radius: int) -> np.ndarray:
    components = (gx, gy, gt)
    height, width = gx.shape[:2]
    tensor = np.empty((height, width, 3, 3))
    for i in range(3):
        for j in range(i, 3):
            entry = box_integrate(np.sum(components[i] * components[j], axis=2), radius)
            tensor[:, :, i, j] = entry
            tensor[:, :, j, i] = entry
    return tensor


def full_structure_tensor(stack: DerivativeStack, config: SequenceConfig) -> np.ndarray:
    """Per-pixel 3x3 structure tensor, shape (height, width, 3, 3)."""
    return _outer_field(stack.Ix, stack.Iy, stack.It, config.integration_radius)


def full_color_flux_tensor(stack: DerivativeStack, config: SequenceConfig) -> np.ndarray:
    """Per-pixel 3x3 color flux tensor, shape (height, width, 3, 3)."""
    return _outer_field(stack.Ixt, stack.Iyt, stack.Itt, config.integration_radius)

"""
Separable Gaussian-derivative filtering of a temporal window.

The window is first collapsed along time with three sampled kernels
(smoothing, first and second derivative), then each temporal product is
filtered spatially:

    Ix  = Gx * T0      Ixt = Gx * T1
    Iy  = Gy * T0      Iyt = Gy * T1
    It  = G  * T1      Itt = G  * T2

Spatial borders are replicate-padded.
"""

import logging
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy import ndimage

from ..core.errors import DimensionMismatch, EmptySequence, SkyfuseError
from ..core.models import BinaryMask, Frame, SequenceConfig
from .models import DerivativeStack

logger = logging.getLogger(__name__)


class WindowTooShort(SkyfuseError):
    """Raised when fewer frames than the temporal window are supplied."""

    pass


def temporal_kernels(window: int, sigma: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Sampled Gaussian smoothing, first- and second-derivative kernels.

    Kernels are indexed by frame offset ``i = -k..k`` from the window center
    and applied as weighted sums ``sum_i w[i] * I(t0 + i)``. Their moments are
    fixed so the filters are exact on low-order polynomials in t:

    - smoothing: ``sum g = 1``
    - first derivative: ``sum w1 = 0``, ``sum i * w1 = 1``
    - second derivative: ``sum w2 = 0``, ``sum i * w2 = 0``, ``sum i^2 * w2 = 2``

    Args:
        window: Odd number of frames
        sigma: Temporal scale in frames

    Returns:
        (g, w1, w2), each of length ``window``
    """
    if window < 3 or window % 2 == 0:
        raise ValueError(f"Temporal window must be odd and >= 3, got {window}")
    k = window // 2
    i = np.arange(-k, k + 1, dtype=np.float64)
    gauss = np.exp(-0.5 * (i / sigma) ** 2)
    g = gauss / gauss.sum()
    w1 = i * gauss
    w1 /= np.sum(i * w1)
    c = np.sum(i**2 * gauss) / gauss.sum()
    w2 = (i**2 - c) * gauss
    w2 *= 2.0 / np.sum(i**2 * w2)
    return g, w1, w2


def _spatial(data: np.ndarray, sigma: float, order_x: int, order_y: int, truncate: float):
    out = ndimage.gaussian_filter1d(
        data, sigma, axis=1, order=order_x, mode="nearest", truncate=truncate
    )
    return ndimage.gaussian_filter1d(
        out, sigma, axis=0, order=order_y, mode="nearest", truncate=truncate
    )


def compute_derivatives(
    frames: Sequence[Frame],
    config: SequenceConfig,
    valid: Optional[BinaryMask] = None,
) -> DerivativeStack:
    """
    Compute I_x, I_y, I_t, I_xt, I_yt, I_tt at the center of a window.

    Args:
        frames: Exactly ``config.temporal_window`` frames of equal size
        config: Filter scales
        valid: Optional validity mask carried into the stack

    Returns:
        DerivativeStack indexed by the center frame

    Raises:
        WindowTooShort: If fewer frames than the window are given
        DimensionMismatch: If frames differ in size or channel count

    Example:
        >>> stack = compute_derivatives(frames[0:5], SequenceConfig())
        >>> stack.Ixt.shape
        (256, 256, 3)
    """
    if not frames:
        raise EmptySequence("No frames in derivative window")
    if len(frames) < config.temporal_window:
        raise WindowTooShort(
            f"Need {config.temporal_window} frames for a derivative window, got {len(frames)}"
        )
    if len(frames) > config.temporal_window:
        raise ValueError(
            f"Window holds {len(frames)} frames, expected {config.temporal_window}"
        )
    first = frames[0]
    for frame in frames[1:]:
        if frame.shape != first.shape or frame.channels != first.channels:
            raise DimensionMismatch(
                f"Frame {frame.index} is {frame.shape}x{frame.channels}, "
                f"expected {first.shape}x{first.channels}"
            )

    g, w1, w2 = temporal_kernels(config.temporal_window, config.temporal_sigma)
    volume = np.stack([f.data for f in frames])  # (T, H, W, C)
    t0 = np.tensordot(g, volume, axes=1)
    t1 = np.tensordot(w1, volume, axes=1)
    t2 = np.tensordot(w2, volume, axes=1)

    sigma, truncate = config.spatial_sigma, config.truncate
    center = frames[len(frames) // 2]
    stack = DerivativeStack(
        Ix=_spatial(t0, sigma, 1, 0, truncate),
        Iy=_spatial(t0, sigma, 0, 1, truncate),
        It=_spatial(t1, sigma, 0, 0, truncate),
        Ixt=_spatial(t1, sigma, 1, 0, truncate),
        Iyt=_spatial(t1, sigma, 0, 1, truncate),
        Itt=_spatial(t2, sigma, 0, 0, truncate),
        frame_index=center.index,
        valid=valid,
    )
    logger.debug(f"Derivatives for frame {center.index} over {len(frames)} frames")
    return stack

"""
Sliding-window motion detection over a stabilized sequence.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence

import numpy as np
from scipy import ndimage

from ..core.errors import DimensionMismatch
from ..core.image_io import luminance
from ..core.models import BinaryMask, Frame, SequenceConfig
from .derivatives import WindowTooShort, compute_derivatives
from .models import MotionResult
from .tensors import (
    color_flux_trace,
    full_color_flux_tensor,
    full_structure_tensor,
    structure_tensor_trace,
)
from .threshold import threshold_trace

logger = logging.getLogger(__name__)


def window_validity(
    masks: Sequence[BinaryMask], config: SequenceConfig
) -> BinaryMask:
    """
    AND the per-frame validity masks of a window and erode by the filter support.

    Pixels whose derivative filters or integration box reach a warp border are dropped.
    The raster border itself is not eroded, since it is replicate-padded.
    """
    combined = np.logical_and.reduce([m.bits for m in masks])
    support = config.spatial_support()
    if combined.all() or support == 0:
        return BinaryMask(combined)
    structure = np.ones((2 * support + 1, 2 * support + 1), dtype=bool)
    eroded = ndimage.binary_erosion(combined, structure=structure, border_value=1)
    return BinaryMask(eroded)


def motion_masks(
    frames: Sequence[Frame],
    config: SequenceConfig,
    valid_masks: Optional[Sequence[BinaryMask]] = None,
    jobs: int = 1,
    grayscale: bool = False,
) -> List[MotionResult]:
    """
    Flux traces and motion masks for every interior frame of a sequence.

    The first and last ``temporal_window // 2`` frames have no full window
    and get no output.

    Args:
        frames: Stabilized frames in order
        config: Filter and threshold settings
        valid_masks: Per-frame warp validity (all valid when omitted)
        jobs: Worker threads; output order does not depend on it
        grayscale: Convert frames to luminance before filtering

    Returns:
        One MotionResult per interior frame, in frame order

    Raises:
        WindowTooShort: If the sequence is shorter than one window
        DimensionMismatch: If mask and frame counts differ
    """
    window = config.temporal_window
    if len(frames) < window:
        raise WindowTooShort(
            f"Sequence has {len(frames)} frames, temporal window needs {window}"
        )
    if valid_masks is not None and len(valid_masks) != len(frames):
        raise DimensionMismatch(f"{len(frames)} frames but {len(valid_masks)} validity masks")
    if grayscale:
        frames = [luminance(f) for f in frames]

    half = config.half_window

    def work(center: int) -> MotionResult:
        span = slice(center - half, center + half + 1)
        valid = window_validity(valid_masks[span], config) if valid_masks is not None else None
        stack = compute_derivatives(frames[span], config, valid=valid)
        flux = color_flux_trace(stack, config)
        structure = structure_tensor_trace(stack, config)
        result = threshold_trace(flux, config.trace_threshold_mode)
        tensors = {}
        if config.debug:
            tensors = {
                "flux_tensor": full_color_flux_tensor(stack, config),
                "structure_tensor": full_structure_tensor(stack, config),
            }
        return MotionResult(
            frame_index=frames[center].index,
            flux=flux,
            structure=structure,
            threshold=result,
            **tensors,
        )

    centers = range(half, len(frames) - half)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(work, centers))
    else:
        results = [work(c) for c in centers]

    degenerate = sum(1 for r in results if r.threshold.degenerate)
    logger.info(
        f"Flux tensor: {len(results)} interior frames, {degenerate} degenerate thresholds"
    )
    return results

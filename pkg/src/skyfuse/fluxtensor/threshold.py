"""
Turning a trace field into a binary motion mask.
"""

import logging
from typing import Optional

import numpy as np
from skimage.filters import threshold_otsu

from ..core.models import BinaryMask, ThresholdKind, ThresholdMode
from .models import ThresholdResult, TraceField

logger = logging.getLogger(__name__)

# Otsu runs on log(trace + eps) with eps this fraction of the field maximum.
LOG_OFFSET_FRACTION = 1e-4


def _empty(trace: TraceField, threshold: float, degenerate: bool) -> ThresholdResult:
    height, width = trace.shape
    return ThresholdResult(BinaryMask.zeros(width, height), threshold, degenerate)


def threshold_trace(
    trace: TraceField,
    mode: ThresholdMode,
    valid: Optional[BinaryMask] = None,
) -> ThresholdResult:
    """
    Classify pixels as moving where the trace exceeds a threshold.

    Only valid pixels (the trace's own mask and ``valid``, when given) take
    part in percentile, relative and Otsu statistics, and invalid pixels are
    always false in the result.

    Args:
        trace: Trace field
        mode: fixed, percentile, relative or otsu
        valid: Extra validity mask

    Returns:
        ThresholdResult. A constant field under Otsu, or a field with no
        valid pixels, yields an all-false mask flagged ``degenerate``.

    Example:
        >>> result = threshold_trace(flux, ThresholdMode.fixed(0.5))
        >>> result.mask.count()
        12
    """
    values = trace.values
    keep = np.ones(values.shape, dtype=bool)
    if trace.valid is not None:
        keep &= trace.valid.bits
    if valid is not None:
        keep &= valid.bits

    samples = values[keep]
    if samples.size == 0:
        logger.warning(f"Frame {trace.frame_index}: no valid pixels to threshold")
        return _empty(trace, 0.0, True)

    if mode.kind == ThresholdKind.FIXED:
        threshold = mode.value
    elif mode.kind == ThresholdKind.PERCENTILE:
        threshold = float(np.percentile(samples, mode.value))
    elif mode.kind == ThresholdKind.RELATIVE:
        threshold = mode.value * float(samples.max())
    else:
        peak = float(samples.max())
        if peak <= 0.0 or float(samples.min()) == peak:
            logger.warning(
                f"Frame {trace.frame_index}: trace is constant, Otsu split is degenerate"
            )
            return _empty(trace, peak, True)
        eps = LOG_OFFSET_FRACTION * peak
        log_threshold = float(threshold_otsu(np.log(samples + eps)))
        threshold = float(np.exp(log_threshold) - eps)

    mask = (values > threshold) & keep
    logger.debug(
        f"Frame {trace.frame_index}: {mode} -> threshold {threshold:.4g}, "
        f"{int(mask.sum())} moving pixels"
    )
    return ThresholdResult(BinaryMask(mask), float(threshold))

"""
Turning detection boxes into per-frame appearance masks.
"""

import logging
import math
from typing import Dict, Iterable, Optional, Union

import numpy as np

from ..core.homography import apply_homography
from ..core.models import BBox, BinaryMask, DetectionSet, Homography

logger = logging.getLogger(__name__)


def box_pixel_span(box: BBox, width: int, height: int):
    """
    Column and row ranges of the pixels a box covers, clipped to the raster.

    A pixel is covered when its center lies in ``[x, x + w) x [y, y + h)``.

    Returns:
        (col_start, col_stop, row_start, row_stop); empty ranges when the box
        misses the raster
    """
    c0 = max(0, math.ceil(box.x - 0.5))
    c1 = min(width, math.ceil(box.x + box.w - 0.5))
    r0 = max(0, math.ceil(box.y - 0.5))
    r1 = min(height, math.ceil(box.y + box.h - 0.5))
    return c0, max(c0, c1), r0, max(r0, r1)


def rasterize_boxes(boxes: Iterable[BBox], width: int, height: int) -> BinaryMask:
    """Union of box footprints on a ``width`` x ``height`` raster."""
    if width <= 0 or height <= 0:
        raise ValueError(f"Raster size must be positive, got {width}x{height}")
    bits = np.zeros((height, width), dtype=bool)
    for box in boxes:
        c0, c1, r0, r1 = box_pixel_span(box, width, height)
        bits[r0:r1, c0:c1] = True
    return BinaryMask(bits)


def rasterize_detections(
    detections: DetectionSet, frame_index: int, width: int, height: int
) -> BinaryMask:
    """
    Appearance mask of one frame.

    Args:
        detections: Detections of the whole sequence
        frame_index: Frame to rasterize
        width: Mask width
        height: Mask height

    Returns:
        Mask true on the union of the frame's clamped boxes; all false when
        the frame has no detections

    Example:
        >>> dets = DetectionSet.from_boxes([BBox(0, 0, 2, 2)])
        >>> rasterize_detections(dets, 0, 4, 4).count()
        4
    """
    return rasterize_boxes(detections.for_frame(frame_index), width, height)


def appearance_masks(
    detections: DetectionSet, frame_indices: Iterable[int], width: int, height: int
) -> Dict[int, BinaryMask]:
    """Masks for every requested frame, including frames with no detections."""
    masks = {i: rasterize_detections(detections, i, width, height) for i in frame_indices}
    empty = sum(1 for m in masks.values() if not m.any())
    logger.debug(f"Rasterized {len(masks)} appearance masks ({empty} empty)")
    return masks


def warp_bbox(box: BBox, H: Union[Homography, np.ndarray]) -> Optional[BBox]:
    """
    Map a box through a homography and take the axis-aligned hull of its corners.

    Use this to bring boxes detected on raw frames into stabilized-plane
    coordinates (``H`` = image-to-plane-pixels homography). Box edges sit on
    pixel borders while ``H`` maps pixel centers, hence the half-pixel shifts.

    Returns:
        The hull box with the same category, confidence and frame, or None
        when the mapped corners collapse to a line
    """
    corners = np.array(
        [[box.x, box.y], [box.x2, box.y], [box.x2, box.y2], [box.x, box.y2]], dtype=np.float64
    )
    mapped = apply_homography(H, corners - 0.5) + 0.5
    x0, y0 = mapped.min(axis=0)
    x1, y1 = mapped.max(axis=0)
    if not (x1 > x0 and y1 > y0) or not np.all(np.isfinite(mapped)):
        return None
    return BBox(
        x=float(x0),
        y=float(y0),
        w=float(x1 - x0),
        h=float(y1 - y0),
        category=box.category,
        confidence=box.confidence,
        frame_index=box.frame_index,
    )

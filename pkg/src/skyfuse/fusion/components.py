"""
Connected components and binary morphology on masks.
"""

from typing import List

import numpy as np
from scipy import ndimage

from ..core.models import BBox, BinaryMask, Category
from .models import Blob

# 8-connectivity
_EIGHT = np.ones((3, 3), dtype=bool)


def connected_components(
    mask: BinaryMask,
    min_area: int = 1,
    category: Category = Category.VEHICLE,
    frame_index: int = 0,
) -> List[Blob]:
    """
    8-connected components of a mask with at least ``min_area`` pixels.

    Blobs come out in raster order of their first pixel. They are pairwise
    disjoint and their union is the mask minus the dropped small components.

    Args:
        mask: Input mask
        min_area: Smallest component kept (px^2)
        category: Category stamped on each blob's box
        frame_index: Frame stamped on each blob's box

    Returns:
        List of Blob (pixel coordinates plus tight bounding box)

    Example:
        >>> bits = np.array([[1, 0], [0, 1]], dtype=bool)
        >>> len(connected_components(BinaryMask(bits)))
        1
    """
    labels, count = ndimage.label(mask.bits, structure=_EIGHT)
    if count == 0:
        return []
    blobs = []
    for label, window in enumerate(ndimage.find_objects(labels), start=1):
        if window is None:
            continue
        rows, cols = np.nonzero(labels[window] == label)
        if rows.size < min_area:
            continue
        r0, c0 = window[0].start, window[1].start
        pixels = np.column_stack([rows + r0, cols + c0])
        box = BBox(
            x=float(c0),
            y=float(r0),
            w=float(window[1].stop - c0),
            h=float(window[0].stop - r0),
            category=category,
            confidence=1.0,
            frame_index=frame_index,
        )
        blobs.append(Blob(pixels=pixels, bbox=box))
    return blobs


def _square(radius: int) -> np.ndarray:
    return np.ones((2 * radius + 1, 2 * radius + 1), dtype=bool)


def dilate(bits: np.ndarray, radius: int) -> np.ndarray:
    """Square dilation; pixels outside the raster count as false."""
    if radius == 0:
        return bits.copy()
    return ndimage.binary_dilation(bits, structure=_square(radius), border_value=0)


def erode(bits: np.ndarray, radius: int) -> np.ndarray:
    """Square erosion over the part of the window inside the raster."""
    if radius == 0:
        return bits.copy()
    return ndimage.binary_erosion(bits, structure=_square(radius), border_value=1)


def morphology_close_open(mask: BinaryMask, radius: int) -> BinaryMask:
    """
    Closing then opening with a (2r+1)^2 square.

    Closing never removes input pixels and opening never adds pixels to the
    closed mask. ``radius=0`` returns the input unchanged.

    Raises:
        ValueError: If radius is negative
    """
    if radius < 0:
        raise ValueError(f"Morphology radius must be >= 0, got {radius}")
    if radius == 0:
        return mask
    closed = erode(dilate(mask.bits, radius), radius)
    opened = dilate(erode(closed, radius), radius) & closed
    return BinaryMask(opened)

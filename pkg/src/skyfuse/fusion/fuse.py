"""
Per-frame fusion of motion and appearance masks.

Motion blobs are labeled with the fusion table:

    motion  appearance  size    category
    1       1           any     MovingVehicle
    1       0           small   OtherMovingOrFalse
    1       0           large   Building
    0       1           any     StationaryVehicleOrFalse

A motion blob counts as appearance-positive when at least ``overlap_fraction``
of its pixels lie in the appearance mask. Building blobs outside the appearance
mask are refined into the building mask; its component boxes, aggregated over
the frames seen so far, veto moving vehicles parked on roof-tops.
"""

import logging
from typing import Iterable, List, Sequence

import numpy as np

from ..core.errors import DimensionMismatch
from ..core.models import BBox, BinaryMask, Category, DetectionSet, SequenceConfig
from ..appearance.rasterize import rasterize_boxes
from .components import connected_components, morphology_close_open
from .models import Blob, BlobLabel, FusionOutput

logger = logging.getLogger(__name__)

DEFAULT_OVERLAP_FRACTION = 0.3


def _hull(boxes: Sequence[BBox], category: Category, frame_index: int) -> BBox:
    x0 = min(b.x for b in boxes)
    y0 = min(b.y for b in boxes)
    x1 = max(b.x2 for b in boxes)
    y1 = max(b.y2 for b in boxes)
    return BBox(x0, y0, x1 - x0, y1 - y0, category, 1.0, frame_index)


def _blob_overlap(blob: Blob, bits: np.ndarray) -> np.ndarray:
    """Per-pixel membership of a blob's pixels in ``bits``."""
    return bits[blob.pixels[:, 0], blob.pixels[:, 1]]


def refine_building_mask(
    building_blobs: Iterable[Blob],
    motion: BinaryMask,
    appearance: BinaryMask,
    config: SequenceConfig,
    frame_index: int = 0,
):
    """
    Building mask = (Building blobs outside appearance), closed/opened and size-filtered.

    The result is intersected with ``motion AND NOT appearance`` again since
    closing can bridge into pixels outside the motion mask.

    Returns:
        (building mask, tight boxes of the refined components)
    """
    height, width = motion.shape
    bits = np.zeros((height, width), dtype=bool)
    for blob in building_blobs:
        bits[blob.pixels[:, 0], blob.pixels[:, 1]] = True
    bits &= ~appearance.bits

    refined = morphology_close_open(BinaryMask(bits), config.morphology_radius)
    components = connected_components(
        refined, config.min_blob_area, Category.BUILDING, frame_index
    )
    kept = np.zeros_like(bits)
    for component in components:
        kept[component.pixels[:, 0], component.pixels[:, 1]] = True
    kept &= motion.bits & ~appearance.bits
    return BinaryMask(kept), tuple(c.bbox for c in components)


def fuse(
    motion: BinaryMask,
    appearance: BinaryMask,
    config: SequenceConfig,
    *,
    overlap_fraction: float = DEFAULT_OVERLAP_FRACTION,
    prior_buildings: Iterable[BBox] = (),
    building_filter: bool = True,
    frame_index: int = 0,
) -> FusionOutput:
    """
    Fuse one frame's motion and appearance masks.

    Args:
        motion: Motion mask (flux tensor)
        appearance: Appearance mask (rasterized detector boxes)
        config: Blob size cutoff, minimum blob area and morphology radius
        overlap_fraction: Fraction of a motion blob inside appearance that makes it A=1
        prior_buildings: Aggregated roof-top boxes from earlier frames
        building_filter: Drop moving vehicles inside aggregated building boxes
        frame_index: Frame stamped on every output box

    Returns:
        FusionOutput with masks, categorized boxes and one label per motion blob

    Raises:
        DimensionMismatch: If the masks differ in size
        ValueError: If overlap_fraction is outside (0, 1]

    Example:
        >>> out = fuse(motion, appearance, SequenceConfig())
        >>> out.boxes(Category.MOVING_VEHICLE)
    """
    if motion.shape != appearance.shape:
        raise DimensionMismatch(
            f"Motion mask {motion.width}x{motion.height} does not match "
            f"appearance mask {appearance.width}x{appearance.height}"
        )
    if not 0.0 < overlap_fraction <= 1.0:
        raise ValueError(f"overlap_fraction must be in (0, 1], got {overlap_fraction}")
    height, width = motion.shape

    motion_blobs = connected_components(
        motion, config.min_blob_area, Category.MOVING_VEHICLE, frame_index
    )
    appearance_blobs = connected_components(appearance, 1, Category.VEHICLE, frame_index)
    appearance_labels = np.full((height, width), -1, dtype=np.int64)
    for i, blob in enumerate(appearance_blobs):
        appearance_labels[blob.pixels[:, 0], blob.pixels[:, 1]] = i

    labels: List[BlobLabel] = []
    moving: List[tuple] = []  # (motion blob, appearance box)
    building_blobs: List[Blob] = []
    other: List[BBox] = []
    claimed = set()

    for blob in motion_blobs:
        inside = _blob_overlap(blob, appearance.bits)
        overlap = float(inside.mean())
        if overlap >= overlap_fraction:
            category = Category.MOVING_VEHICLE
            hits = appearance_labels[blob.pixels[inside, 0], blob.pixels[inside, 1]]
            touched = sorted({int(i) for i in hits})
            claimed.update(touched)
            box = _hull(
                [appearance_blobs[i].bbox for i in touched], Category.MOVING_VEHICLE, frame_index
            )
            moving.append((blob, box))
        elif blob.area <= config.small_large_area_cutoff:
            category = Category.OTHER_MOVING_OR_FALSE
            other.append(blob.bbox.with_category(category))
        else:
            category = Category.BUILDING
            building_blobs.append(blob)
        labels.append(BlobLabel(blob.bbox.with_category(category), blob.area, overlap, category))

    if other:
        logger.warning(
            f"Frame {frame_index}: {len(other)} small motion blob(s) without appearance "
            "support (other moving object or false motion)"
        )

    building_mask, building_boxes = refine_building_mask(
        building_blobs, motion, appearance, config, frame_index
    )
    aggregated = list(prior_buildings) + list(building_boxes)

    moving_bits = np.zeros((height, width), dtype=bool)
    moving_boxes: List[BBox] = []
    stationary: List[BBox] = []
    for blob, box in moving:
        cx, cy = box.center
        if building_filter and any(b.contains_point(cx, cy) for b in aggregated):
            logger.debug(f"Frame {frame_index}: vehicle at ({cx:.1f}, {cy:.1f}) is on a roof-top")
            stationary.append(box.with_category(Category.STATIONARY_VEHICLE_OR_FALSE))
            continue
        moving_bits[blob.pixels[:, 0], blob.pixels[:, 1]] = True
        moving_boxes.append(box)
    moving_bits &= ~building_mask.bits
    if building_filter and aggregated:
        moving_bits &= ~rasterize_boxes(aggregated, width, height).bits

    for i, blob in enumerate(appearance_blobs):
        if i not in claimed:
            stationary.append(blob.bbox.with_category(Category.STATIONARY_VEHICLE_OR_FALSE))

    categorized = DetectionSet.from_boxes(
        moving_boxes
        + stationary
        + other
        + [b.bbox.with_category(Category.BUILDING) for b in building_blobs]
    )
    logger.debug(
        f"Frame {frame_index}: {len(motion_blobs)} motion blobs -> {len(moving_boxes)} moving, "
        f"{len(building_blobs)} building, {len(other)} other; {len(stationary)} stationary"
    )
    return FusionOutput(
        moving_vehicle_mask=BinaryMask(moving_bits),
        building_mask=building_mask,
        categorized=categorized,
        blob_labels=tuple(labels),
        building_boxes=building_boxes,
        frame_index=frame_index,
    )

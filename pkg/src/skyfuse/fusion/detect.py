"""
Sequence-level fusion and the detector variants of the method ladder.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional

from ..core.models import BBox, BinaryMask, Category, DetectionSet, SequenceConfig
from .buildings import DEFAULT_IOU_LINK, BuildingAggregator
from .components import connected_components
from .fuse import DEFAULT_OVERLAP_FRACTION, fuse
from .models import BuildingTrack, FusionMethod, FusionOutput

logger = logging.getLogger(__name__)


@dataclass
class SequenceFusion:
    """Per-frame fusion outputs in frame order plus the building tracks they fed."""

    outputs: List[FusionOutput] = field(default_factory=list)
    tracks: List[BuildingTrack] = field(default_factory=list)

    def categorized(self) -> DetectionSet:
        merged = DetectionSet()
        for output in self.outputs:
            merged = merged.merged(output.categorized)
        return merged

    def moving_vehicles(self) -> DetectionSet:
        return DetectionSet.from_boxes(
            box for output in self.outputs for box in output.boxes(Category.MOVING_VEHICLE)
        )

    def by_frame(self) -> Dict[int, FusionOutput]:
        return {output.frame_index: output for output in self.outputs}


def _appearance_for(
    appearance_masks: Mapping[int, BinaryMask], frame_index: int, like: BinaryMask
) -> BinaryMask:
    mask = appearance_masks.get(frame_index)
    if mask is None:
        logger.debug(f"Frame {frame_index}: no appearance mask, using an empty one")
        return BinaryMask.zeros(like.width, like.height)
    return mask


def fuse_sequence(
    motion_masks: Mapping[int, BinaryMask],
    appearance_masks: Mapping[int, BinaryMask],
    config: SequenceConfig,
    *,
    overlap_fraction: float = DEFAULT_OVERLAP_FRACTION,
    building_filter: bool = True,
    iou_link: float = DEFAULT_IOU_LINK,
) -> SequenceFusion:
    """
    Fuse every frame that has a motion mask, in frame order.

    Roof-top boxes are folded into a BuildingAggregator as frames go by, so the
    roof-top filter of frame t sees every building found in frames <= t.

    Args:
        motion_masks: frame_index -> motion mask
        appearance_masks: frame_index -> appearance mask; missing frames are empty
        config: Sequence configuration
        overlap_fraction: Appearance overlap that makes a motion blob A=1
        building_filter: Apply the roof-top filter
        iou_link: Building aggregation link threshold

    Returns:
        SequenceFusion holding the outputs and the building tracks
    """
    aggregator = BuildingAggregator(iou_link)
    result = SequenceFusion()
    for frame_index in sorted(motion_masks):
        motion = motion_masks[frame_index]
        output = fuse(
            motion,
            _appearance_for(appearance_masks, frame_index, motion),
            config,
            overlap_fraction=overlap_fraction,
            prior_buildings=aggregator.boxes_so_far(),
            building_filter=building_filter,
            frame_index=frame_index,
        )
        aggregator.add_frame(frame_index, output.building_boxes)
        result.outputs.append(output)
    result.tracks = aggregator.tracks
    logger.info(
        f"Fused {len(result.outputs)} frames: {len(result.moving_vehicles())} moving-vehicle "
        f"detections, {len(result.tracks)} building tracks"
    )
    return result


def _blob_boxes(mask: BinaryMask, min_area: int, frame_index: int) -> List[BBox]:
    return [
        blob.bbox
        for blob in connected_components(mask, min_area, Category.MOVING_VEHICLE, frame_index)
    ]


def detect(
    method: FusionMethod,
    motion_masks: Mapping[int, BinaryMask],
    appearance_masks: Mapping[int, BinaryMask],
    config: SequenceConfig,
    *,
    overlap_fraction: float = DEFAULT_OVERLAP_FRACTION,
    iou_link: float = DEFAULT_IOU_LINK,
    fusion: Optional[SequenceFusion] = None,
) -> DetectionSet:
    """
    Moving-vehicle detections reported by one detector variant.

    Every variant is evaluated on the frames that have a motion mask:

    - MOTION: every motion blob of at least ``min_blob_area``
    - APPEARANCE: every appearance blob, parked vehicles included
    - MOTION_APPEARANCE: fusion-table moving vehicles
    - MOTION_APPEARANCE_BUILDING: the same, after the roof-top filter

    Args:
        fusion: A precomputed fusion run to reuse; it must have been made with
            the building filter the method asks for

    Returns:
        DetectionSet of MovingVehicle boxes
    """
    method = FusionMethod(method)
    frames = sorted(motion_masks)
    if method == FusionMethod.MOTION:
        return DetectionSet.from_boxes(
            box for i in frames for box in _blob_boxes(motion_masks[i], config.min_blob_area, i)
        )
    if method == FusionMethod.APPEARANCE:
        return DetectionSet.from_boxes(
            box
            for i in frames
            for box in _blob_boxes(_appearance_for(appearance_masks, i, motion_masks[i]), 1, i)
        )
    if fusion is None:
        fusion = fuse_sequence(
            motion_masks,
            appearance_masks,
            config,
            overlap_fraction=overlap_fraction,
            building_filter=method == FusionMethod.MOTION_APPEARANCE_BUILDING,
            iou_link=iou_link,
        )
    return fusion.moving_vehicles()

"""
Motion/appearance fusion for skyfuse.

Labels motion blobs with the fusion table, refines parallax-induced building
blobs into a building mask, aggregates roof-tops over time and drops vehicles
parked on them from the moving-vehicle mask.

Example:
    >>> from skyfuse.fusion import fuse_sequence
    >>> result = fuse_sequence(motion_masks, appearance_masks, SequenceConfig())
    >>> result.moving_vehicles()
"""

from .models import FusionMethod, Blob, BlobLabel, FusionOutput, BuildingTrack
from .components import connected_components, morphology_close_open, dilate, erode
from .fuse import DEFAULT_OVERLAP_FRACTION, fuse, refine_building_mask
from .buildings import (
    DEFAULT_IOU_LINK,
    BUILDING_TRACK_HEADER,
    BuildingAggregator,
    aggregate_buildings,
    write_building_tracks,
)
from .detect import SequenceFusion, fuse_sequence, detect
from .overlay import CATEGORY_COLORS, draw_overlay, write_overlay

__all__ = [
    "FusionMethod",
    "Blob",
    "BlobLabel",
    "FusionOutput",
    "BuildingTrack",
    "connected_components",
    "morphology_close_open",
    "dilate",
    "erode",
    "DEFAULT_OVERLAP_FRACTION",
    "fuse",
    "refine_building_mask",
    "DEFAULT_IOU_LINK",
    "BUILDING_TRACK_HEADER",
    "BuildingAggregator",
    "aggregate_buildings",
    "write_building_tracks",
    "SequenceFusion",
    "fuse_sequence",
    "detect",
    "CATEGORY_COLORS",
    "draw_overlay",
    "write_overlay",
]

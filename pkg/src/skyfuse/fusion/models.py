"""
Data types produced by the fusion stage.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from ..core.models import BBox, BinaryMask, Category, DetectionSet


class FusionMethod(str, Enum):
    """Detector variants compared by the method ladder."""

    MOTION = "motion"
    APPEARANCE = "appearance"
    MOTION_APPEARANCE = "motion+appearance"
    MOTION_APPEARANCE_BUILDING = "motion+appearance+building"

    @property
    def label(self) -> str:
        return {
            FusionMethod.MOTION: "Motion (flux tensor)",
            FusionMethod.APPEARANCE: "Vehicle appearance",
            FusionMethod.MOTION_APPEARANCE: "Flux + appearance",
            FusionMethod.MOTION_APPEARANCE_BUILDING: "Flux + appearance + building",
        }[self]


@dataclass(frozen=True, eq=False)
class Blob:
    """One 8-connected component: its pixels and tight bounding box."""

    pixels: np.ndarray  # (N, 2) array of (row, col)
    bbox: BBox

    @property
    def area(self) -> int:
        return int(self.pixels.shape[0])


@dataclass(frozen=True)
class BlobLabel:
    """The fusion-table decision for one motion blob.

    Attributes:
        bbox: Tight box of the motion blob
        area: Blob area (px^2)
        overlap: Fraction of blob pixels inside the appearance mask
        category: Decision
    """

    bbox: BBox
    area: int
    overlap: float
    category: Category


@dataclass(frozen=True, eq=False)
class FusionOutput:
    """Result of fusing one frame's motion and appearance masks.

    Attributes:
        moving_vehicle_mask: Pixels of MovingVehicle blobs, minus building
            pixels and aggregated building boxes
        building_mask: Refined Building blobs, within motion and outside appearance
        categorized: One box per decision (moving vehicles carry the
            appearance box they matched)
        blob_labels: One entry per motion blob above the minimum area
        building_boxes: Roof-top boxes found on this frame
        frame_index: Frame the masks belong to
    """

    moving_vehicle_mask: BinaryMask
    building_mask: BinaryMask
    categorized: DetectionSet
    blob_labels: Tuple[BlobLabel, ...] = ()
    building_boxes: Tuple[BBox, ...] = ()
    frame_index: int = 0

    def boxes(self, category: Category) -> Tuple[BBox, ...]:
        return tuple(self.categorized.filter(category))


@dataclass
class BuildingTrack:
    """Roof-top boxes linked across frames under one aggregation id."""

    track_id: int
    boxes: list = field(default_factory=list)

    @property
    def first_frame(self) -> int:
        return self.boxes[0].frame_index

    @property
    def last_frame(self) -> int:
        return self.boxes[-1].frame_index

    @property
    def last_box(self) -> Optional[BBox]:
        return self.boxes[-1] if self.boxes else None

    def spread(self) -> float:
        """Diagonal of the hull of member-box centers (px); grows with building height."""
        if len(self.boxes) < 2:
            return 0.0
        centers = np.array([b.center for b in self.boxes])
        extent = centers.max(axis=0) - centers.min(axis=0)
        return float(np.hypot(extent[0], extent[1]))

    def hull(self) -> BBox:
        """Union box of every member box."""
        x0 = min(b.x for b in self.boxes)
        y0 = min(b.y for b in self.boxes)
        x1 = max(b.x2 for b in self.boxes)
        y1 = max(b.y2 for b in self.boxes)
        return BBox(x0, y0, x1 - x0, y1 - y0, Category.BUILDING, 1.0, self.last_frame)

"""
Appearance detection ingest for skyfuse.

Reads detections produced by an external vehicle detector, filters and merges
their classes, and rasterizes them into per-frame appearance masks on the
stabilized plane.

Example:
    >>> from skyfuse.appearance import load_detections, rasterize_detections
    >>> dets = load_detections("detections.csv", {"car", "pick-up", "van"}, 0.25)
    >>> mask = rasterize_detections(dets, frame_index=3, width=512, height=512)
"""

from .models import DetectionRecord
from .detection_io import (
    DETECTION_HEADER,
    DEFAULT_VEHICLE_CLASSES,
    DEFAULT_MIN_CONFIDENCE,
    GROUND_TRUTH_LABEL,
    DetectionParseError,
    iter_detection_records,
    read_detection_records,
    load_detections,
    load_ground_truth,
    load_categorized,
    write_detections,
)
from .rasterize import (
    box_pixel_span,
    rasterize_boxes,
    rasterize_detections,
    appearance_masks,
    warp_bbox,
)

__all__ = [
    "DetectionRecord",
    "DETECTION_HEADER",
    "DEFAULT_VEHICLE_CLASSES",
    "DEFAULT_MIN_CONFIDENCE",
    "GROUND_TRUTH_LABEL",
    "DetectionParseError",
    "iter_detection_records",
    "read_detection_records",
    "load_detections",
    "load_ground_truth",
    "load_categorized",
    "write_detections",
    "box_pixel_span",
    "rasterize_boxes",
    "rasterize_detections",
    "appearance_masks",
    "warp_bbox",
]

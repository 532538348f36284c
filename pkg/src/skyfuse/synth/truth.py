"""
Exact ground-truth boxes on the plane raster.

Box coordinates put pixel borders on integers (pixel ``c`` spans
``[c, c + 1)``) while the plane raster maps pixel centers, so every
conversion from raster coordinates adds half a pixel.
"""

from typing import Dict

import numpy as np

from ..core.homography import apply_homography
from ..core.models import BBox, CameraPose, Category, DetectionSet
from ..georeg.models import PlaneConfig
from ..georeg.projection import camera_to_plane_pixels
from .models import Rect, SceneSpec


def world_rect_to_box(
    rect: Rect,
    plane: PlaneConfig,
    category: Category = Category.GROUND_TRUTH,
    frame_index: int = 0,
) -> BBox:
    """Box on the plane raster covering a world rectangle lying on the ground."""
    x0, y0, x1, y1 = rect
    (col0, row0), (col1, row1) = plane.world_to_pixels(np.array([[x0, y1], [x1, y0]]))
    return BBox(
        float(col0 + 0.5),
        float(row0 + 0.5),
        float(col1 - col0),
        float(row1 - row0),
        category,
        1.0,
        frame_index,
    )


def elevated_rect_to_box(
    rect: Rect,
    height: float,
    pose: CameraPose,
    plane: PlaneConfig,
    category: Category,
    frame_index: int,
) -> BBox:
    """
    Where a horizontal rectangle at ``height`` lands on the stabilized plane.

    The rectangle's corners are projected into the camera and mapped back onto
    the plane by the plane homography; the result is the hull of the mapped corners.
    """
    if height == 0.0:
        return world_rect_to_box(rect, plane, category, frame_index)
    x0, y0, x1, y1 = rect
    corners = np.array([[x0, y0, height], [x1, y0, height], [x1, y1, height], [x0, y1, height]])
    mapped = apply_homography(camera_to_plane_pixels(pose, plane), pose.project(corners))
    (c0, r0), (c1, r1) = mapped.min(axis=0), mapped.max(axis=0)
    return BBox(
        float(c0 + 0.5),
        float(r0 + 0.5),
        float(c1 - c0),
        float(r1 - r0),
        category,
        1.0,
        frame_index,
    )


def vehicle_boxes(spec: SceneSpec, plane: PlaneConfig) -> DetectionSet:
    """Moving-vehicle ground truth for every frame of the orbit."""
    boxes = [
        world_rect_to_box(vehicle.rect_at(spec.frame_time(k)), plane, Category.GROUND_TRUTH, k)
        for k in range(spec.orbit.frame_count)
        for vehicle in spec.vehicles
    ]
    return DetectionSet.from_boxes(boxes)


def parked_boxes(
    spec: SceneSpec, poses: Dict[int, CameraPose], plane: PlaneConfig
) -> DetectionSet:
    """Parked vehicles per frame; those on roofs drift with the roof's parallax."""
    boxes = [
        elevated_rect_to_box(
            parked.rect, spec.support_height(parked), poses[k], plane, Category.GROUND_TRUTH, k
        )
        for k in sorted(poses)
        for parked in spec.parked
    ]
    return DetectionSet.from_boxes(boxes)


def building_roof_boxes(
    spec: SceneSpec, poses: Dict[int, CameraPose], plane: PlaneConfig
) -> DetectionSet:
    """
    Exact roof box of every building in every frame, on the plane raster.

    Example:
        >>> roofs = building_roof_boxes(spec, orbit_poses(spec), spec.plane_config())
        >>> roofs.for_frame(0)[0].category
        <Category.BUILDING: 'Building'>
    """
    boxes = [
        elevated_rect_to_box(
            building.footprint, building.height, poses[k], plane, Category.BUILDING, k
        )
        for k in sorted(poses)
        for building in spec.buildings
    ]
    return DetectionSet.from_boxes(boxes)

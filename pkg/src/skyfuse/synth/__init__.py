"""
Synthetic aerial scenes with exact geometric ground truth.

Renders a textured ground plane with moving and parked vehicles and tall
buildings from an orbiting pinhole camera, and reports where every object
lands on the stabilized plane.

Example:
    >>> from skyfuse.synth import SceneSpec, render_sequence, oracle_appearance
    >>> scene = render_sequence(SceneSpec.demo())
    >>> detections = oracle_appearance(
    ...     scene.ground_truth.merged(scene.parked_truth), dropout=0.1, pad=2.0
    ... )
"""

from .models import (
    InvalidSpec,
    VehicleSpec,
    ParkedSpec,
    BuildingSpec,
    TextureSpec,
    OrbitSpec,
    CameraSpec,
    SceneSpec,
    SceneOutputs,
)
from .truth import (
    world_rect_to_box,
    elevated_rect_to_box,
    vehicle_boxes,
    parked_boxes,
    building_roof_boxes,
)
from .render import GroundTexture, rect_coverage, orbit_poses, render_frame, render_sequence
from .oracle import oracle_appearance
from .scene_io import write_scene

__all__ = [
    "InvalidSpec",
    "VehicleSpec",
    "ParkedSpec",
    "BuildingSpec",
    "TextureSpec",
    "OrbitSpec",
    "CameraSpec",
    "SceneSpec",
    "SceneOutputs",
    "world_rect_to_box",
    "elevated_rect_to_box",
    "vehicle_boxes",
    "parked_boxes",
    "building_roof_boxes",
    "GroundTexture",
    "rect_coverage",
    "orbit_poses",
    "render_frame",
    "render_sequence",
    "oracle_appearance",
    "write_scene",
]

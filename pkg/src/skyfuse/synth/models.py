"""
Scene description for the synthetic aerial-video generator.

A scene is a textured ground plane with moving and parked vehicles and
box-shaped buildings, seen by a pinhole camera circling the scene center.
Distances are meters, velocities meters per second, angles radians.
"""

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Annotated, Dict, List, Optional, Tuple, Union

import numpy as np
import yaml
from pydantic import AfterValidator, BaseModel, ConfigDict, Field, ValidationError, field_validator

from ..core.errors import SkyfuseError
from ..core.models import CameraPose, DetectionSet, Frame
from ..georeg.models import PlaneConfig

# (x0, y0, x1, y1) in world meters
Rect = Tuple[float, float, float, float]


class InvalidSpec(SkyfuseError):
    """Raised when a scene cannot be rendered as described."""

    pass


def _check_color(color: Tuple[float, float, float]) -> Tuple[float, float, float]:
    if any(not 0.0 <= c <= 1.0 for c in color):
        raise ValueError(f"Colors are RGB in [0, 1], got {color}")
    return color


def _check_size(size: Tuple[float, float]) -> Tuple[float, float]:
    if size[0] <= 0 or size[1] <= 0:
        raise ValueError(f"Sizes must be positive, got {size}")
    return size


Color = Annotated[Tuple[float, float, float], AfterValidator(_check_color)]
Size = Annotated[Tuple[float, float], AfterValidator(_check_size)]


def _centered_rect(center: Tuple[float, float], size: Tuple[float, float]) -> Rect:
    half_x, half_y = size[0] / 2.0, size[1] / 2.0
    return (center[0] - half_x, center[1] - half_y, center[0] + half_x, center[1] + half_y)


class _Part(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class VehicleSpec(_Part):
    """A vehicle driving on the ground plane at constant velocity."""

    start: Tuple[float, float] = Field(..., description="Center at t = 0 (m)")
    velocity: Tuple[float, float] = Field(default=(0.0, 0.0), description="Velocity (m/s)")
    size: Size = Field(default=(4.6, 2.0), description="Extent along X, Y (m)")
    color: Color = Field(default=(0.9, 0.75, 0.1), description="RGB in [0, 1]")

    def rect_at(self, time: float) -> Rect:
        center = (self.start[0] + self.velocity[0] * time, self.start[1] + self.velocity[1] * time)
        return _centered_rect(center, self.size)


class ParkedSpec(_Part):
    """A static vehicle; it sits on a roof when its footprint lies inside a building."""

    position: Tuple[float, float] = Field(..., description="Center (m)")
    size: Size = Field(default=(4.6, 2.0), description="Extent along X, Y (m)")
    color: Color = Field(default=(0.85, 0.85, 0.8), description="RGB in [0, 1]")

    @property
    def rect(self) -> Rect:
        return _centered_rect(self.position, self.size)


class BuildingSpec(_Part):
    """An axis-aligned box with a flat roof."""

    footprint: Rect = Field(..., description="(x0, y0, x1, y1) on the ground (m)")
    height: float = Field(..., gt=0, description="Roof height above the plane (m)")
    roof_color: Color = Field(default=(0.75, 0.3, 0.25), description="RGB in [0, 1]")
    wall_color: Color = Field(default=(0.55, 0.55, 0.58), description="RGB in [0, 1]")

    @field_validator("footprint")
    @classmethod
    def validate_footprint(cls, v: Rect) -> Rect:
        if v[2] <= v[0] or v[3] <= v[1]:
            raise ValueError(f"Footprint needs x0 < x1 and y0 < y1, got {v}")
        return v

    def contains(self, rect: Rect) -> bool:
        x0, y0, x1, y1 = self.footprint
        return x0 <= rect[0] and y0 <= rect[1] and rect[2] <= x1 and rect[3] <= y1

    def overlaps(self, rect: Rect) -> bool:
        x0, y0, x1, y1 = self.footprint
        return rect[0] < x1 and x0 < rect[2] and rect[1] < y1 and y0 < rect[3]


class TextureSpec(_Part):
    """Seeded band-limited ground texture."""

    scale: float = Field(default=6.0, gt=0, description="Shortest texture wavelength (m)")
    contrast: float = Field(default=0.08, ge=0, le=0.5, description="Luma deviation")
    base_color: Color = Field(default=(0.42, 0.45, 0.38), description="Mean ground RGB")
    components: int = Field(default=16, ge=1, description="Sinusoids per texture channel")


class OrbitSpec(_Part):
    """Circular flight path around the scene center, camera aimed at the center."""

    radius: float = Field(default=2600.0, ge=0, description="Orbit radius (m)")
    altitude: float = Field(default=1500.0, gt=0, description="Height above ground (m)")
    angular_rate: float = Field(default=0.006, description="Heading change per frame (rad)")
    start_angle: float = Field(default=0.0, description="Bearing of the first frame (rad)")
    frame_count: int = Field(default=16, ge=1, description="Frames to render")
    center: Tuple[float, float] = Field(default=(0.0, 0.0), description="Aim point (m)")


class CameraSpec(_Part):
    """Image size and focal length; the focal length defaults to matching the plane GSD."""

    width: int = Field(default=320, gt=0, description="Image width (px)")
    height: int = Field(default=320, gt=0, description="Image height (px)")
    focal: Optional[float] = Field(default=None, gt=0, description="Focal length (px)")


class SceneSpec(BaseModel):
    """
    Everything needed to render a synthetic aerial sequence.

    Defaults echo a wide-area surveillance flight: 1.5 km above ground,
    4 Hz frame rate, 2.6 km orbit radius and 25 cm ground sample distance.

    Example:
        >>> spec = SceneSpec.from_yaml("scene.yaml")
        >>> spec.plane_config().plane_scale
        0.25
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    seed: int = Field(default=0, description="Seed of the ground texture")
    texture: TextureSpec = Field(default_factory=TextureSpec)
    vehicles: List[VehicleSpec] = Field(default_factory=list)
    parked: List[ParkedSpec] = Field(default_factory=list)
    buildings: List[BuildingSpec] = Field(default_factory=list)
    orbit: OrbitSpec = Field(default_factory=OrbitSpec)
    camera: CameraSpec = Field(default_factory=CameraSpec)
    frame_rate: float = Field(default=4.0, gt=0, description="Frames per second")
    gsd: float = Field(default=0.25, gt=0, description="Plane raster scale (m/px)")
    plane_width: int = Field(default=256, gt=0, description="Plane raster width (px)")
    plane_height: int = Field(default=256, gt=0, description="Plane raster height (px)")

    @classmethod
    def from_yaml(cls, path: Union[str, Path]) -> "SceneSpec":
        """
        Load a scene from YAML.

        Raises:
            InvalidSpec: If the file is missing, not YAML, or not a valid scene
        """
        path = Path(path)
        if not path.is_file():
            raise InvalidSpec(f"Scene file not found: {path}")
        try:
            data = yaml.safe_load(path.read_text()) or {}
            return cls.model_validate(data)
        except yaml.YAMLError as e:
            raise InvalidSpec(f"{path} is not valid YAML: {e}") from e
        except ValidationError as e:
            raise InvalidSpec(f"{path} is not a valid scene:\n{e}") from e

    def to_yaml(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(yaml.safe_dump(self.model_dump(mode="json"), sort_keys=True))
        return path

    @classmethod
    def demo(cls, frame_count: int = 16) -> "SceneSpec":
        """
        A small scene with one car driving, one parked on the street, and one
        parked on the roof of a 30 m building.

        The orbit is tight enough that the roof drifts by more than a pixel per
        frame on the stabilized plane.
        """
        return cls(
            seed=7,
            vehicles=[VehicleSpec(start=(-24.0, -12.0), velocity=(2.0, 0.0))],
            parked=[
                ParkedSpec(position=(-20.0, 20.0)),
                ParkedSpec(position=(10.0, 14.0), color=(0.15, 0.2, 0.6)),
            ],
            buildings=[BuildingSpec(footprint=(0.0, 4.0, 20.0, 24.0), height=30.0)],
            orbit=OrbitSpec(
                radius=600.0,
                altitude=1500.0,
                angular_rate=0.025,
                start_angle=math.pi / 4,
                frame_count=frame_count,
            ),
            camera=CameraSpec(width=384, height=384),
        )

    def plane_config(self) -> PlaneConfig:
        """Plane raster at ``gsd`` centered on the orbit's aim point."""
        centered = PlaneConfig.centered(self.plane_width, self.plane_height, self.gsd)
        ox, oy = centered.plane_origin
        cx, cy = self.orbit.center
        return centered.model_copy(update={"plane_origin": (ox + cx, oy + cy)})

    def focal_length(self) -> float:
        """Configured focal length, or the one giving ``gsd`` at the aim point."""
        if self.camera.focal is not None:
            return self.camera.focal
        slant = math.hypot(self.orbit.radius, self.orbit.altitude)
        return slant / self.gsd

    def intrinsics(self) -> np.ndarray:
        f = self.focal_length()
        u = (self.camera.width - 1) / 2.0
        v = (self.camera.height - 1) / 2.0
        return np.array([[f, 0.0, u], [0.0, f, v], [0.0, 0.0, 1.0]])

    def frame_time(self, frame_index: int) -> float:
        return frame_index / self.frame_rate

    @property
    def max_building_height(self) -> float:
        return max((b.height for b in self.buildings), default=0.0)

    def support_height(self, parked: ParkedSpec) -> float:
        """Height of the surface a parked vehicle stands on: a roof or the ground."""
        heights = [b.height for b in self.buildings if b.contains(parked.rect)]
        return max(heights, default=0.0)

    def check(self, temporal_window: int = 3) -> None:
        """
        Reject scenes that cannot be rendered or processed.

        Raises:
            InvalidSpec: If the camera flies at or below a roof, the sequence is
                shorter than one derivative window, or a parked vehicle straddles
                a building edge
        """
        if self.orbit.altitude <= self.max_building_height:
            raise InvalidSpec(
                f"Altitude {self.orbit.altitude} m must exceed the tallest building "
                f"({self.max_building_height} m)"
            )
        if self.orbit.frame_count < temporal_window:
            raise InvalidSpec(
                f"{self.orbit.frame_count} frames is shorter than the temporal window "
                f"({temporal_window})"
            )
        for i, parked in enumerate(self.parked):
            for building in self.buildings:
                if building.overlaps(parked.rect) and not building.contains(parked.rect):
                    raise InvalidSpec(f"Parked vehicle {i} straddles a building edge")


@dataclass
class SceneOutputs:
    """
    A rendered scene and its geometric ground truth.

    Attributes:
        spec: The scene that was rendered
        plane: Plane raster the truth boxes refer to
        frames: Rendered frames in index order
        poses: Camera pose per frame index
        ground_truth: Moving-vehicle boxes on the plane raster
        parked_truth: Parked-vehicle boxes on the plane raster (roof vehicles
            drift with their roof)
        building_truth: Exact roof boxes on the plane raster per frame
    """

    spec: SceneSpec
    plane: PlaneConfig
    frames: List[Frame]
    poses: Dict[int, CameraPose]
    ground_truth: DetectionSet
    parked_truth: DetectionSet
    building_truth: DetectionSet

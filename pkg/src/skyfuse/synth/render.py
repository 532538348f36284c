"""
Analytic ray-cast renderer for synthetic scenes.

Every pixel casts one ray through its center. Ground texture, vehicles and
roofs are continuous functions of plane coordinates, and each rectangle is
box-filtered over the pixel's footprint on its surface, which anti-aliases
the edges. Walls are flat-shaded by face orientation.
"""

import logging
from concurrent.futures import Executor, ThreadPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..core.models import CameraPose, Frame
from ..georeg.projection import pose_look_at
from .models import BuildingSpec, Rect, SceneOutputs, SceneSpec
from .truth import building_roof_boxes, parked_boxes, vehicle_boxes

logger = logging.getLogger(__name__)

SKY_COLOR = np.array([0.62, 0.72, 0.86])
# wall brightness for faces normal to X and to Y
WALL_SHADE = (0.85, 0.7)


class GroundTexture:
    """
    Seeded sum of sinusoids over the ground plane.

    One set of waves drives brightness and a weaker second set tints the
    color, so every channel has gradient structure.
    """

    def __init__(
        self,
        seed: int,
        scale: float,
        contrast: float,
        base_color: Sequence[float],
        components: int = 16,
    ):
        rng = np.random.default_rng(seed)
        self.contrast = contrast
        self.base_color = np.asarray(base_color, dtype=np.float64)
        self._waves = [self._draw(rng, scale, components) for _ in range(2)]
        self._tint = np.array([1.0, -0.5, -0.5])

    @classmethod
    def from_spec(cls, spec: SceneSpec) -> "GroundTexture":
        t = spec.texture
        return cls(spec.seed, t.scale, t.contrast, t.base_color, t.components)

    @staticmethod
    def _draw(rng: np.random.Generator, scale: float, n: int) -> Tuple[np.ndarray, np.ndarray]:
        angles = rng.uniform(0.0, np.pi, n)
        wavelengths = scale * 2.0 ** rng.uniform(0.0, 2.0, n)
        phases = rng.uniform(0.0, 2.0 * np.pi, n)
        k = 2.0 * np.pi / wavelengths
        vectors = np.column_stack([k * np.cos(angles), k * np.sin(angles)])
        return vectors, phases

    def _field(self, which: int, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        vectors, phases = self._waves[which]
        total = np.zeros_like(x)
        for (kx, ky), phase in zip(vectors, phases):
            total += np.sin(kx * x + ky * y + phase)
        # unit variance
        return total / np.sqrt(len(phases) / 2.0)

    def __call__(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        luma = self.contrast * self._field(0, x, y)
        chroma = 0.3 * self.contrast * self._field(1, x, y)
        color = self.base_color + luma[..., None] + chroma[..., None] * self._tint
        return np.clip(color, 0.0, 1.0)


def rect_coverage(x: np.ndarray, y: np.ndarray, rect: Rect, footprint: np.ndarray) -> np.ndarray:
    """
    Fraction of a square pixel footprint centered at (x, y) inside ``rect``.

    Args:
        x, y: Surface coordinates of the pixel centers (m)
        rect: (x0, y0, x1, y1) on the same surface (m)
        footprint: Pixel side length on the surface (m)
    """
    x0, y0, x1, y1 = rect
    half = footprint / 2.0
    cover_x = (np.minimum(x + half, x1) - np.maximum(x - half, x0)) / footprint
    cover_y = (np.minimum(y + half, y1) - np.maximum(y - half, y0)) / footprint
    return np.clip(cover_x, 0.0, 1.0) * np.clip(cover_y, 0.0, 1.0)


def _blend(color: np.ndarray, coverage: np.ndarray, paint: Sequence[float]) -> np.ndarray:
    c = coverage[..., None]
    return color * (1.0 - c) + c * np.asarray(paint, dtype=np.float64)


def orbit_poses(spec: SceneSpec) -> Dict[int, CameraPose]:
    """Camera pose of every frame: on the orbit circle, aimed at the orbit center."""
    orbit = spec.orbit
    K = spec.intrinsics()
    cx, cy = orbit.center
    poses = {}
    for k in range(orbit.frame_count):
        angle = orbit.start_angle + k * orbit.angular_rate
        center = (
            cx + orbit.radius * np.cos(angle),
            cy + orbit.radius * np.sin(angle),
            orbit.altitude,
        )
        poses[k] = pose_look_at(center, (cx, cy, 0.0), K)
    return poses


def _box_center(building: BuildingSpec) -> np.ndarray:
    x0, y0, x1, y1 = building.footprint
    return np.array([(x0 + x1) / 2.0, (y0 + y1) / 2.0, building.height / 2.0])


def _pixel_rays(spec: SceneSpec, pose: CameraPose) -> np.ndarray:
    """World-frame ray directions through every pixel center, shape (H, W, 3)."""
    rows, cols = np.mgrid[0 : spec.camera.height, 0 : spec.camera.width].astype(np.float64)
    pixels = np.stack([cols, rows, np.ones_like(cols)], axis=-1)
    to_world = pose.R.T @ np.linalg.inv(pose.K)
    return pixels @ to_world.T


def _box_entry(
    origin: np.ndarray, rays: np.ndarray, building: BuildingSpec
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Slab test against a building: (hit, entry parameter, axis of the entry face)."""
    x0, y0, x1, y1 = building.footprint
    lows = (x0, y0, 0.0)
    highs = (x1, y1, building.height)
    near, far = [], []
    with np.errstate(divide="ignore", invalid="ignore"):
        for axis in range(3):
            d = rays[..., axis]
            t1 = (lows[axis] - origin[axis]) / d
            t2 = (highs[axis] - origin[axis]) / d
            inside = lows[axis] <= origin[axis] <= highs[axis]
            parallel = d == 0.0
            t1 = np.where(parallel, -np.inf if inside else np.inf, t1)
            t2 = np.where(parallel, np.inf if inside else -np.inf, t2)
            near.append(np.minimum(t1, t2))
            far.append(np.maximum(t1, t2))
    near_stack = np.stack(near)
    t_near = near_stack.max(axis=0)
    t_far = np.stack(far).min(axis=0)
    hit = (t_near <= t_far) & (t_far > 0)
    return hit, t_near, near_stack.argmax(axis=0)


def render_frame(
    spec: SceneSpec,
    pose: CameraPose,
    frame_index: int,
    texture: Optional[GroundTexture] = None,
) -> Frame:
    """
    Render one frame of the scene from ``pose``.

    Moving vehicles sit at their position at ``frame_index / frame_rate``.
    Buildings are painted far to near.
    """
    texture = texture or GroundTexture.from_spec(spec)
    origin = pose.center
    rays = _pixel_rays(spec, pose)
    dz = rays[..., 2]
    ray_length = np.linalg.norm(rays, axis=-1)
    f = pose.f

    with np.errstate(divide="ignore"):
        t_ground = np.where(dz < 0, -origin[2] / dz, np.inf)
    sky = ~np.isfinite(t_ground)
    t_safe = np.where(sky, 0.0, t_ground)
    gx = origin[0] + t_safe * rays[..., 0]
    gy = origin[1] + t_safe * rays[..., 1]
    footprint = np.maximum(t_safe * ray_length / f, 1e-9)

    color = texture(gx, gy)
    time = spec.frame_time(frame_index)
    for vehicle in spec.vehicles:
        coverage = rect_coverage(gx, gy, vehicle.rect_at(time), footprint)
        color = _blend(color, coverage, vehicle.color)
    for parked in spec.parked:
        if spec.support_height(parked) == 0.0:
            color = _blend(color, rect_coverage(gx, gy, parked.rect, footprint), parked.color)
    color[sky] = SKY_COLOR

    far_to_near = sorted(
        spec.buildings, key=lambda b: -float(np.linalg.norm(origin - _box_center(b)))
    )
    for building in far_to_near:
        hit, t_near, axis = _box_entry(origin, rays, building)
        hit &= t_near < t_ground
        entry_z = origin[2] + t_near * dz
        wall = hit & (entry_z < building.height * (1.0 - 1e-9))
        for face, shade in enumerate(WALL_SHADE):
            color[wall & (axis == face)] = np.asarray(building.wall_color) * shade

        with np.errstate(divide="ignore"):
            t_roof = np.where(dz < 0, (building.height - origin[2]) / dz, 0.0)
        rx = origin[0] + t_roof * rays[..., 0]
        ry = origin[1] + t_roof * rays[..., 1]
        roof_footprint = np.maximum(t_roof * ray_length / f, 1e-9)
        surface = np.broadcast_to(np.asarray(building.roof_color), color.shape).copy()
        for parked in spec.parked:
            if building.contains(parked.rect) and spec.support_height(parked) == building.height:
                surface = _blend(
                    surface, rect_coverage(rx, ry, parked.rect, roof_footprint), parked.color
                )
        roof = rect_coverage(rx, ry, building.footprint, roof_footprint) * (t_roof > 0)
        color = color * (1.0 - roof[..., None]) + surface * roof[..., None]

    return Frame(np.clip(color, 0.0, 1.0), index=frame_index, timestamp=time)


def render_sequence(
    spec: SceneSpec,
    jobs: int = 1,
    executor: Optional[Executor] = None,
    temporal_window: int = 3,
) -> SceneOutputs:
    """
    Render every frame of the orbit and compute the scene's ground truth.

    Frames are rendered independently; with ``jobs > 1`` (or an ``executor``)
    they are rendered concurrently and returned in index order.

    Args:
        spec: Scene to render
        jobs: Worker threads when no executor is given
        executor: Optional executor to render on
        temporal_window: Shortest acceptable sequence

    Returns:
        SceneOutputs with frames, poses and truth boxes on ``spec.plane_config()``

    Raises:
        InvalidSpec: If the scene fails ``SceneSpec.check``
    """
    spec.check(temporal_window)
    poses = orbit_poses(spec)
    texture = GroundTexture.from_spec(spec)
    plane = spec.plane_config()
    indices = sorted(poses)

    def _render(k: int) -> Frame:
        return render_frame(spec, poses[k], k, texture)

    if executor is not None:
        frames: List[Frame] = list(executor.map(_render, indices))
    elif jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            frames = list(pool.map(_render, indices))
    else:
        frames = [_render(k) for k in indices]
    logger.info(
        f"Rendered {len(frames)} frames of {spec.camera.width}x{spec.camera.height} px "
        f"with {len(spec.vehicles)} moving, {len(spec.parked)} parked vehicles "
        f"and {len(spec.buildings)} buildings"
    )
    return SceneOutputs(
        spec=spec,
        plane=plane,
        frames=frames,
        poses=poses,
        ground_truth=vehicle_boxes(spec, plane),
        parked_truth=parked_boxes(spec, poses, plane),
        building_truth=building_roof_boxes(spec, poses, plane),
    )


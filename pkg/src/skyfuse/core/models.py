"""
Core data models for skyfuse.

Raster-holding types (Frame, BinaryMask, Homography, CameraPose) are frozen
dataclasses around read-only numpy arrays. Configuration types are pydantic
models so they can be loaded from YAML and validated in one place.

Pixel layout is row-major and channel-interleaved: ``Frame.data`` has shape
``(height, width, channels)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, Iterable, Iterator, Mapping, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from .errors import SingularMatrix

# Values within this distance of [0, 1] are clipped instead of rejected.
_RANGE_TOLERANCE = 1e-9


def _readonly(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


# ============================================================================
# Rasters
# ============================================================================


@dataclass(frozen=True, eq=False)
class Frame:
    """A gray or RGB raster with intensities in [0, 1].

    Attributes:
        data: Array of shape (height, width, channels), float64
        index: Nonnegative frame index within its sequence
        timestamp: Optional acquisition time in seconds

    Example:
        >>> frame = Frame(np.zeros((2, 2, 3)), index=0)
        >>> frame.channels
        3
    """

    data: np.ndarray
    index: int = 0
    timestamp: Optional[float] = None

    def __post_init__(self) -> None:
        data = np.array(self.data, dtype=np.float64, copy=True)
        if data.ndim == 2:
            data = data[:, :, np.newaxis]
        if data.ndim != 3:
            raise ValueError(f"Frame data must be 2D or 3D, got shape {data.shape}")
        if data.shape[2] not in (1, 3):
            raise ValueError(f"Frame must have 1 or 3 channels, got {data.shape[2]}")
        if data.shape[0] == 0 or data.shape[1] == 0:
            raise ValueError("Frame must have positive width and height")
        if not np.all(np.isfinite(data)):
            raise ValueError("Frame intensities must be finite")
        if data.min() < -_RANGE_TOLERANCE or data.max() > 1.0 + _RANGE_TOLERANCE:
            raise ValueError(
                f"Frame intensities must lie in [0, 1], got [{data.min()}, {data.max()}]"
            )
        np.clip(data, 0.0, 1.0, out=data)
        if self.index < 0:
            raise ValueError(f"Frame index must be nonnegative, got {self.index}")
        object.__setattr__(self, "data", _readonly(data))

    @property
    def height(self) -> int:
        return int(self.data.shape[0])

    @property
    def width(self) -> int:
        return int(self.data.shape[1])

    @property
    def channels(self) -> int:
        return int(self.data.shape[2])

    @property
    def shape(self) -> Tuple[int, int]:
        """(height, width) of the raster."""
        return (self.height, self.width)

    def with_data(self, data: np.ndarray) -> "Frame":
        """Return a frame with new pixel data and the same index and timestamp."""
        return Frame(data, index=self.index, timestamp=self.timestamp)

    def with_index(self, index: int) -> "Frame":
        return replace(self, index=index)


@dataclass(frozen=True)
class BinaryMask:
    """One boolean per pixel, shape (height, width)."""

    bits: np.ndarray

    def __post_init__(self) -> None:
        bits = np.array(self.bits, dtype=bool, copy=True)
        if bits.ndim != 2:
            raise ValueError(f"BinaryMask must be 2D, got shape {bits.shape}")
        object.__setattr__(self, "bits", _readonly(bits))

    @classmethod
    def zeros(cls, width: int, height: int) -> "BinaryMask":
        return cls(np.zeros((height, width), dtype=bool))

    @property
    def height(self) -> int:
        return int(self.bits.shape[0])

    @property
    def width(self) -> int:
        return int(self.bits.shape[1])

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.height, self.width)

    def count(self) -> int:
        """Number of true pixels."""
        return int(np.count_nonzero(self.bits))

    def any(self) -> bool:
        return bool(self.bits.any())

    def __and__(self, other: "BinaryMask") -> "BinaryMask":
        return BinaryMask(self.bits & other.bits)

    def __or__(self, other: "BinaryMask") -> "BinaryMask":
        return BinaryMask(self.bits | other.bits)

    def __invert__(self) -> "BinaryMask":
        return BinaryMask(~self.bits)

    def __sub__(self, other: "BinaryMask") -> "BinaryMask":
        return BinaryMask(self.bits & ~other.bits)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BinaryMask):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.bits, other.bits))


# ============================================================================
# Geometry
# ============================================================================


def _canonical_scale(matrix: np.ndarray) -> float:
    """Signed value of the first entry (row-major) with the largest magnitude."""
    flat = matrix.ravel()
    magnitudes = np.abs(flat)
    peak = magnitudes.max()
    # first index within rounding of the peak, so s*H and H pick the same entry
    idx = int(np.flatnonzero(magnitudes >= peak * (1.0 - 1e-12))[0])
    return float(flat[idx])


@dataclass(frozen=True, eq=False)
class Homography:
    """A 3x3 projective map stored in canonical scale.

    The largest-magnitude entry is +1, which makes serialized matrices
    comparable entry by entry. Construction normalizes the input.
    """

    matrix: np.ndarray

    def __post_init__(self) -> None:
        matrix = np.array(self.matrix, dtype=np.float64, copy=True)
        if matrix.shape != (3, 3):
            raise ValueError(f"Homography must be 3x3, got shape {matrix.shape}")
        if not np.all(np.isfinite(matrix)):
            raise SingularMatrix("Homography contains NaN or infinite entries")
        scale = _canonical_scale(matrix)
        if scale == 0.0:
            raise SingularMatrix("Homography is the zero matrix")
        matrix = matrix / scale
        if abs(np.linalg.det(matrix)) < 1e-14:
            raise SingularMatrix("Homography determinant is zero")
        object.__setattr__(self, "matrix", _readonly(matrix))

    @classmethod
    def identity(cls) -> "Homography":
        return cls(np.eye(3))

    def __matmul__(self, other: "Homography") -> "Homography":
        return Homography(self.matrix @ other.matrix)

    def max_abs_difference(self, other: "Homography") -> float:
        return float(np.max(np.abs(self.matrix - other.matrix)))


@dataclass(frozen=True, eq=False)
class CameraPose:
    """Pinhole camera: intrinsics K and world-to-camera rotation/translation.

    A world point X projects to ``K (R X + t)``. Translation is in meters.
    """

    K: np.ndarray
    R: np.ndarray
    t: np.ndarray

    def __post_init__(self) -> None:
        K = np.array(self.K, dtype=np.float64, copy=True)
        R = np.array(self.R, dtype=np.float64, copy=True)
        t = np.array(self.t, dtype=np.float64, copy=True).reshape(-1)
        if K.shape != (3, 3) or R.shape != (3, 3) or t.shape != (3,):
            raise ValueError("CameraPose needs a 3x3 K, a 3x3 R and a 3-vector t")
        if not (np.all(np.isfinite(K)) and np.all(np.isfinite(R)) and np.all(np.isfinite(t))):
            raise ValueError("CameraPose entries must be finite")
        if K[0, 0] <= 0:
            raise ValueError(f"Focal length must be positive, got {K[0, 0]}")
        if np.max(np.abs(R.T @ R - np.eye(3))) > 1e-9:
            raise ValueError("Rotation matrix is not orthonormal")
        if abs(np.linalg.det(R) - 1.0) > 1e-9:
            raise ValueError("Rotation matrix must have determinant +1")
        object.__setattr__(self, "K", _readonly(K))
        object.__setattr__(self, "R", _readonly(R))
        object.__setattr__(self, "t", _readonly(t))

    @classmethod
    def from_intrinsics(
        cls, f: float, u: float, v: float, R: np.ndarray, t: np.ndarray
    ) -> "CameraPose":
        """Build a pose from focal length and principal point in pixels."""
        K = np.array([[f, 0.0, u], [0.0, f, v], [0.0, 0.0, 1.0]])
        return cls(K=K, R=R, t=t)

    @property
    def f(self) -> float:
        return float(self.K[0, 0])

    @property
    def u(self) -> float:
        return float(self.K[0, 2])

    @property
    def v(self) -> float:
        return float(self.K[1, 2])

    @property
    def lam(self) -> float:
        """The plane-homography scale f * r3^T t (zero when the center lies on Z=0)."""
        return self.f * float(self.R[:, 2] @ self.t)

    @property
    def center(self) -> np.ndarray:
        """Camera center in world coordinates, -R^T t."""
        return -self.R.T @ self.t

    def project(self, points: np.ndarray) -> np.ndarray:
        """Project (N, 3) world points to (N, 2) pixel coordinates."""
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        camera = pts @ self.R.T + self.t
        image = camera @ self.K.T
        return image[:, :2] / image[:, 2:3]


# ============================================================================
# Detections
# ============================================================================


class Category(str, Enum):
    """Detection categories, including the fusion decision-table outcomes."""

    MOVING_VEHICLE = "MovingVehicle"
    STATIONARY_VEHICLE_OR_FALSE = "StationaryVehicleOrFalse"
    OTHER_MOVING_OR_FALSE = "OtherMovingOrFalse"
    BUILDING = "Building"
    VEHICLE = "Vehicle"
    GROUND_TRUTH = "GroundTruth"


@dataclass(frozen=True)
class BBox:
    """Axis-aligned box anchored at its top-left corner, in pixels."""

    x: float
    y: float
    w: float
    h: float
    category: Category = Category.VEHICLE
    confidence: float = 1.0
    frame_index: int = 0

    def __post_init__(self) -> None:
        if not (self.w > 0 and self.h > 0):
            raise ValueError(f"BBox needs positive size, got w={self.w}, h={self.h}")
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"BBox confidence must be in [0, 1], got {self.confidence}")
        if self.frame_index < 0:
            raise ValueError(f"Frame index must be nonnegative, got {self.frame_index}")

    @property
    def x2(self) -> float:
        return self.x + self.w

    @property
    def y2(self) -> float:
        return self.y + self.h

    @property
    def area(self) -> float:
        return self.w * self.h

    @property
    def center(self) -> Tuple[float, float]:
        return (self.x + self.w / 2.0, self.y + self.h / 2.0)

    def contains_point(self, px: float, py: float) -> bool:
        return self.x <= px < self.x2 and self.y <= py < self.y2

    def iou(self, other: "BBox") -> float:
        ix = max(0.0, min(self.x2, other.x2) - max(self.x, other.x))
        iy = max(0.0, min(self.y2, other.y2) - max(self.y, other.y))
        inter = ix * iy
        union = self.area + other.area - inter
        return inter / union if union > 0 else 0.0

    def clamp(self, width: int, height: int) -> Optional["BBox"]:
        """Clip to [0, width] x [0, height]; None if nothing remains."""
        x1, y1 = max(0.0, self.x), max(0.0, self.y)
        x2, y2 = min(float(width), self.x2), min(float(height), self.y2)
        if x2 <= x1 or y2 <= y1:
            return None
        return replace(self, x=x1, y=y1, w=x2 - x1, h=y2 - y1)

    def with_category(self, category: Category, confidence: Optional[float] = None) -> "BBox":
        return replace(
            self,
            category=category,
            confidence=self.confidence if confidence is None else confidence,
        )

    def sort_key(self) -> Tuple:
        return (
            self.frame_index,
            self.y,
            self.x,
            self.h,
            self.w,
            self.category.value,
            self.confidence,
        )


@dataclass(frozen=True)
class DetectionSet:
    """Boxes grouped by frame index, deduplicated and in a canonical order.

    Attributes:
        frames: frame_index -> tuple of boxes sorted by position
        unknown_labels: counts of input class labels that were not accepted
    """

    frames: Mapping[int, Tuple[BBox, ...]] = field(default_factory=dict)
    unknown_labels: Mapping[str, int] = field(default_factory=dict)

    @classmethod
    def from_boxes(
        cls, boxes: Iterable[BBox], unknown_labels: Optional[Mapping[str, int]] = None
    ) -> "DetectionSet":
        grouped: Dict[int, set] = {}
        for box in boxes:
            grouped.setdefault(box.frame_index, set()).add(box)
        frames = {
            index: tuple(sorted(members, key=BBox.sort_key))
            for index, members in sorted(grouped.items())
        }
        return cls(frames=frames, unknown_labels=dict(sorted((unknown_labels or {}).items())))

    def for_frame(self, frame_index: int) -> Tuple[BBox, ...]:
        return self.frames.get(frame_index, ())

    @property
    def frame_indices(self) -> Tuple[int, ...]:
        return tuple(sorted(self.frames))

    def __iter__(self) -> Iterator[BBox]:
        for index in sorted(self.frames):
            yield from self.frames[index]

    def __len__(self) -> int:
        return sum(len(boxes) for boxes in self.frames.values())

    def filter(self, *categories: Category) -> "DetectionSet":
        wanted = set(categories)
        return DetectionSet.from_boxes(b for b in self if b.category in wanted)

    def restrict(self, frame_indices: Iterable[int]) -> "DetectionSet":
        wanted = set(frame_indices)
        return DetectionSet.from_boxes(b for b in self if b.frame_index in wanted)

    def merged(self, other: "DetectionSet") -> "DetectionSet":
        counts = dict(self.unknown_labels)
        for label, n in other.unknown_labels.items():
            counts[label] = counts.get(label, 0) + n
        return DetectionSet.from_boxes(list(self) + list(other), counts)


# ============================================================================
# Configuration
# ============================================================================


class ThresholdKind(str, Enum):
    FIXED = "fixed"
    PERCENTILE = "percentile"
    OTSU = "otsu"
    RELATIVE = "relative"


class ThresholdMode(BaseModel):
    """How a trace field is split into moving / non-moving pixels.

    Example:
        >>> ThresholdMode.parse("percentile:99").value
        99.0
    """

    model_config = ConfigDict(frozen=True)

    kind: ThresholdKind = Field(default=ThresholdKind.PERCENTILE, description="Threshold rule")
    value: float = Field(default=99.0, ge=0.0, description="Threshold, percentile or fraction")

    @classmethod
    def fixed(cls, value: float) -> "ThresholdMode":
        return cls(kind=ThresholdKind.FIXED, value=value)

    @classmethod
    def percentile(cls, p: float) -> "ThresholdMode":
        if not 0.0 <= p <= 100.0:
            raise ValueError(f"Percentile must be in [0, 100], got {p}")
        return cls(kind=ThresholdKind.PERCENTILE, value=p)

    @classmethod
    def otsu(cls) -> "ThresholdMode":
        return cls(kind=ThresholdKind.OTSU, value=0.0)

    @classmethod
    def relative(cls, fraction: float) -> "ThresholdMode":
        if not 0.0 < fraction <= 1.0:
            raise ValueError(f"Relative threshold must be in (0, 1], got {fraction}")
        return cls(kind=ThresholdKind.RELATIVE, value=fraction)

    @classmethod
    def parse(cls, text: str) -> "ThresholdMode":
        """Parse ``kind[:value]``, e.g. ``fixed:0.01``, ``percentile:99``, ``otsu``."""
        kind, _, value = text.strip().lower().partition(":")
        if kind == ThresholdKind.OTSU.value:
            return cls.otsu()
        if not value:
            raise ValueError(f"Threshold mode '{text}' needs a value")
        builders = {
            ThresholdKind.FIXED.value: cls.fixed,
            ThresholdKind.PERCENTILE.value: cls.percentile,
            ThresholdKind.RELATIVE.value: cls.relative,
        }
        if kind not in builders:
            raise ValueError(f"Unknown threshold mode '{kind}'")
        return builders[kind](float(value))

    def __str__(self) -> str:
        if self.kind == ThresholdKind.OTSU:
            return "otsu"
        return f"{self.kind.value}:{self.value:g}"


class SequenceConfig(BaseModel):
    """Filter scales, integration window and blob parameters for one sequence."""

    model_config = ConfigDict(frozen=True)

    temporal_window: int = Field(default=5, ge=3, description="Frames per derivative window")
    spatial_sigma: float = Field(default=1.0, gt=0, description="Spatial derivative scale (px)")
    temporal_sigma: float = Field(default=1.0, gt=0, description="Temporal derivative scale")
    integration_radius: int = Field(default=2, ge=1, description="Integration half-width")
    trace_threshold_mode: ThresholdMode = Field(
        default_factory=lambda: ThresholdMode.percentile(99.0),
        description="Rule turning a flux trace into a motion mask",
    )
    small_large_area_cutoff: int = Field(
        default=400, gt=0, description="Blob area (px^2) separating small from large"
    )
    morphology_radius: int = Field(default=1, ge=1, description="Building refinement radius")
    min_blob_area: int = Field(default=16, ge=1, description="Smallest blob kept (px^2)")
    truncate: float = Field(default=4.0, gt=0, description="Gaussian support in sigmas")
    debug: bool = Field(default=False, description="Also compute off-diagonal tensor terms")

    @field_validator("temporal_window")
    @classmethod
    def validate_window(cls, v: int) -> int:
        """Derivatives are evaluated at the window center, so the window is odd."""
        if v % 2 == 0:
            raise ValueError(f"temporal_window must be odd, got {v}")
        return v

    @property
    def half_window(self) -> int:
        return self.temporal_window // 2

    def spatial_support(self) -> int:
        """Pixels from a border that the derivative filters plus the integration box can reach."""
        return int(np.ceil(self.truncate * self.spatial_sigma)) + self.integration_radius

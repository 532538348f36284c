"""
Pydantic models for the ground-plane raster.
"""

from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field


class PlaneConfig(BaseModel):
    """Pixelization of the ground plane (Z = 0), north-up.

    Plane pixel (col, row) maps to world ``X = ox + s * col``,
    ``Y = oy - s * row``, so ``plane_origin`` is the world XY of pixel (0, 0).
    """

    model_config = ConfigDict(frozen=True)

    output_width: int = Field(..., gt=0, description="Plane raster width (px)")
    output_height: int = Field(..., gt=0, description="Plane raster height (px)")
    plane_scale: float = Field(..., gt=0, description="Ground sample distance (m/px)")
    plane_origin: Tuple[float, float] = Field(
        default=(0.0, 0.0), description="World XY (m) of plane pixel (0, 0)"
    )

    @classmethod
    def centered(cls, width: int, height: int, scale: float) -> "PlaneConfig":
        """Plane raster whose center pixel sits on the world origin."""
        return cls(
            output_width=width,
            output_height=height,
            plane_scale=scale,
            plane_origin=(-scale * (width - 1) / 2.0, scale * (height - 1) / 2.0),
        )

    def world_to_pixels(self, xy: np.ndarray) -> np.ndarray:
        """Map (N, 2) world XY in meters to (N, 2) plane pixel coordinates."""
        pts = np.atleast_2d(np.asarray(xy, dtype=np.float64))
        ox, oy = self.plane_origin
        return np.column_stack(
            [(pts[:, 0] - ox) / self.plane_scale, (oy - pts[:, 1]) / self.plane_scale]
        )


def plane_to_world_matrix(plane: PlaneConfig) -> np.ndarray:
    """The affine 3x3 map from plane pixels (col, row, 1) to world (X, Y, 1)."""
    s = plane.plane_scale
    ox, oy = plane.plane_origin
    return np.array([[s, 0.0, ox], [0.0, -s, oy], [0.0, 0.0, 1.0]])

"""
Category-colored box overlays on stabilized frames, for inspection.
"""

import math
from pathlib import Path
from typing import Dict, Tuple, Union

import cv2
import numpy as np

from ..core.image_io import encode_image, frame_to_uint8
from ..core.models import Category, Frame
from .models import FusionOutput

# RGB
CATEGORY_COLORS: Dict[Category, Tuple[int, int, int]] = {
    Category.MOVING_VEHICLE: (255, 40, 40),
    Category.STATIONARY_VEHICLE_OR_FALSE: (40, 120, 255),
    Category.OTHER_MOVING_OR_FALSE: (255, 220, 0),
    Category.BUILDING: (0, 220, 90),
    Category.VEHICLE: (255, 255, 255),
    Category.GROUND_TRUTH: (255, 0, 255),
}


def draw_overlay(frame: Frame, output: FusionOutput, thickness: int = 1) -> np.ndarray:
    """Return an RGB uint8 copy of ``frame`` with the categorized boxes drawn on it."""
    pixels = frame_to_uint8(frame)
    if pixels.shape[2] == 1:
        pixels = np.repeat(pixels, 3, axis=2)
    canvas = np.ascontiguousarray(pixels)
    for box in output.categorized:
        top_left = (int(math.floor(box.x)), int(math.floor(box.y)))
        bottom_right = (int(math.ceil(box.x2)) - 1, int(math.ceil(box.y2)) - 1)
        cv2.rectangle(canvas, top_left, bottom_right, CATEGORY_COLORS[box.category], thickness)
    return canvas


def write_overlay(frame: Frame, output: FusionOutput, path: Union[str, Path]) -> Path:
    """Draw the overlay and save it as PNG."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_image(draw_overlay(frame, output), ".png"))
    return path

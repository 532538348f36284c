"""
A controllable stand-in for an appearance-based vehicle detector.
"""

import logging
from typing import Optional, Tuple

import numpy as np

from ..core.models import BBox, Category, DetectionSet

logger = logging.getLogger(__name__)

# (width, height) of injected false boxes, pixels
DEFAULT_FALSE_BOX_SIZE = (18.0, 8.0)


def _check_rate(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must be in [0, 1], got {value}")


def oracle_appearance(
    truth: DetectionSet,
    dropout: float = 0.0,
    jitter: float = 0.0,
    false_positive_rate: float = 0.0,
    pad: float = 0.0,
    seed: int = 0,
    frame_size: Optional[Tuple[int, int]] = None,
    false_box_size: Tuple[float, float] = DEFAULT_FALSE_BOX_SIZE,
) -> DetectionSet:
    """
    Perturb ground-truth vehicle boxes the way a real detector would.

    Boxes are visited in canonical order. Each is dropped with probability
    ``dropout``; survivors are grown by ``pad`` pixels on every side and
    have each edge moved by a uniform offset in ``[-jitter, jitter]``. Every
    frame then receives one false box with probability ``false_positive_rate``,
    placed uniformly inside ``frame_size``.

    Args:
        truth: Vehicle boxes, moving and parked
        dropout: Miss probability per box
        jitter: Largest edge displacement (px)
        false_positive_rate: Probability of one false box per frame
        pad: Growth on every side (px)
        seed: Random seed; equal inputs and seed give equal outputs
        frame_size: (width, height) the false boxes are placed in; defaults
            to the hull of the truth boxes
        false_box_size: (width, height) of the false boxes (px)

    Returns:
        Detections with category Vehicle and confidence 1

    Raises:
        ValueError: If a rate lies outside [0, 1] or jitter / pad is negative
    """
    _check_rate("dropout", dropout)
    _check_rate("false_positive_rate", false_positive_rate)
    if jitter < 0 or pad < 0:
        raise ValueError(f"jitter and pad must be nonnegative, got {jitter} and {pad}")
    rng = np.random.default_rng(seed)

    kept = []
    for box in truth:
        # jitter is drawn for dropped boxes too
        keep = rng.uniform() >= dropout
        dx0, dy0, dx1, dy1 = rng.uniform(-jitter, jitter, 4) if jitter > 0 else (0.0,) * 4
        if not keep:
            continue
        x0, y0 = box.x - pad + dx0, box.y - pad + dy0
        x1, y1 = box.x2 + pad + dx1, box.y2 + pad + dy1
        kept.append(
            BBox(
                float(x0),
                float(y0),
                float(max(x1 - x0, 1.0)),
                float(max(y1 - y0, 1.0)),
                Category.VEHICLE,
                1.0,
                box.frame_index,
            )
        )

    false_boxes = []
    if false_positive_rate > 0:
        if frame_size is None:
            x_max = max((b.x2 for b in truth), default=1.0)
            y_max = max((b.y2 for b in truth), default=1.0)
        else:
            x_max, y_max = frame_size
        w, h = false_box_size
        for frame_index in truth.frame_indices:
            if rng.uniform() < false_positive_rate:
                x = rng.uniform(0.0, max(x_max - w, 0.0))
                y = rng.uniform(0.0, max(y_max - h, 0.0))
                false_boxes.append(
                    BBox(float(x), float(y), w, h, Category.VEHICLE, 1.0, frame_index)
                )

    logger.info(
        f"Oracle detector kept {len(kept)} of {len(truth)} boxes "
        f"and added {len(false_boxes)} false boxes"
    )
    return DetectionSet.from_boxes(kept + false_boxes)

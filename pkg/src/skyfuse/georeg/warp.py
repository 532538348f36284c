"""
Bilinear homography warping and sequence stabilization.

Every output pixel is pulled from the source through an output-to-input
homography. Pixels whose source falls outside the input raster (or behind
the camera) are set to 0 and reported in a validity mask so that later
stages can ignore warp borders.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import List, NamedTuple, Optional, Sequence, Union

import numpy as np
from scipy import ndimage

from ..core.errors import DimensionMismatch, EmptySequence
from ..core.models import BinaryMask, CameraPose, Frame, Homography
from .models import PlaneConfig
from .projection import plane_pixels_to_camera

logger = logging.getLogger(__name__)

# Sources this close outside the raster still count as inside.
_EDGE_TOLERANCE = 1e-6


class WarpResult(NamedTuple):
    """A warped frame and the mask of pixels that had a source sample."""

    frame: Frame
    valid: BinaryMask


def warp_homography(
    frame: Frame,
    H_out_to_in: Union[Homography, np.ndarray],
    width: int,
    height: int,
    front_only: bool = False,
) -> WarpResult:
    """
    Resample ``frame`` onto a ``width`` x ``height`` raster.

    Output pixel (col, row) takes the bilinear sample of the input at
    ``H_out_to_in @ (col, row, 1)``. Pixel centers sit on integer coordinates.

    Args:
        frame: Source frame
        H_out_to_in: Output-to-input map (Homography or raw 3x3 array)
        width: Output width in pixels
        height: Output height in pixels
        front_only: Treat a nonpositive third homogeneous coordinate as
            invalid (used when the matrix carries camera depth)

    Returns:
        WarpResult with the warped frame and its validity mask
    """
    matrix = H_out_to_in.matrix if isinstance(H_out_to_in, Homography) else np.asarray(H_out_to_in)
    rows, cols = np.mgrid[0:height, 0:width].astype(np.float64)
    w = matrix[2, 0] * cols + matrix[2, 1] * rows + matrix[2, 2]
    with np.errstate(divide="ignore", invalid="ignore"):
        src_x = (matrix[0, 0] * cols + matrix[0, 1] * rows + matrix[0, 2]) / w
        src_y = (matrix[1, 0] * cols + matrix[1, 1] * rows + matrix[1, 2]) / w

    valid = np.isfinite(src_x) & np.isfinite(src_y) & (np.abs(w) > 0)
    if front_only:
        valid &= w > 0
    valid &= (src_x >= -_EDGE_TOLERANCE) & (src_x <= frame.width - 1 + _EDGE_TOLERANCE)
    valid &= (src_y >= -_EDGE_TOLERANCE) & (src_y <= frame.height - 1 + _EDGE_TOLERANCE)

    coords = np.stack(
        [
            np.where(valid, np.clip(src_y, 0, frame.height - 1), 0.0),
            np.where(valid, np.clip(src_x, 0, frame.width - 1), 0.0),
        ]
    )
    out = np.zeros((height, width, frame.channels))
    for c in range(frame.channels):
        sampled = ndimage.map_coordinates(frame.data[:, :, c], coords, order=1, mode="nearest")
        out[:, :, c] = np.where(valid, sampled, 0.0)

    return WarpResult(frame.with_data(out), BinaryMask(valid))


def warp_to_plane(frame: Frame, pose: CameraPose, plane: PlaneConfig) -> WarpResult:
    """
    Project a camera frame onto the ground-plane raster.

    Args:
        frame: Camera image
        pose: Camera pose for this frame
        plane: Plane raster definition

    Returns:
        WarpResult; intensities stay in [0, 1]

    Raises:
        DegeneratePose: If the camera center lies on the plane
    """
    return warp_homography(
        frame,
        plane_pixels_to_camera(pose, plane),
        plane.output_width,
        plane.output_height,
        front_only=True,
    )


def stabilize_sequence(
    frames: Sequence[Frame],
    poses: Sequence[CameraPose],
    plane: PlaneConfig,
    jobs: int = 1,
    executor: Optional[ThreadPoolExecutor] = None,
) -> List[WarpResult]:
    """
    Warp every frame onto the plane, returning results in frame order.

    Raises:
        EmptySequence: If no frames are given
        DimensionMismatch: If frame and pose counts differ
    """
    if not frames:
        raise EmptySequence("Nothing to stabilize")
    if len(frames) != len(poses):
        raise DimensionMismatch(f"{len(frames)} frames but {len(poses)} poses")

    def work(i: int) -> WarpResult:
        result = warp_to_plane(frames[i], poses[i], plane)
        logger.debug(
            f"Frame {frames[i].index}: {result.valid.count()} of "
            f"{plane.output_width * plane.output_height} plane pixels covered"
        )
        return result

    if executor is not None:
        results = list(executor.map(work, range(len(frames))))
    elif jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(work, range(len(frames))))
    else:
        results = [work(i) for i in range(len(frames))]

    logger.info(f"Stabilized {len(results)} frames onto {plane.output_width}x{plane.output_height}")
    return results

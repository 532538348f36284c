"""
Georegistration module for skyfuse.

Builds the analytic image <-> ground-plane homographies from camera poses
and warps frames onto a common plane raster, producing the stabilized
sequence.

Example:
    >>> from skyfuse.georeg import PlaneConfig, warp_to_plane, load_poses
    >>> poses = load_poses("poses.csv")
    >>> plane = PlaneConfig.centered(512, 512, 0.25)
    >>> stabilized = warp_to_plane(frame, poses[0], plane)
"""

from .models import PlaneConfig, plane_to_world_matrix
from .projection import (
    homography_plane_to_camera,
    homography_camera_to_plane,
    homography_camera_to_plane_generic,
    minor_form_camera_to_plane,
    camera_to_plane_pixels,
    plane_pixels_to_camera,
    project_to_plane,
    parallax_displacement,
    pose_look_at,
)
from .warp import WarpResult, warp_homography, warp_to_plane, stabilize_sequence
from .pose_io import PoseFileError, load_poses, save_poses, POSE_HEADER

__all__ = [
    "PlaneConfig",
    "plane_to_world_matrix",
    "homography_plane_to_camera",
    "homography_camera_to_plane",
    "homography_camera_to_plane_generic",
    "minor_form_camera_to_plane",
    "camera_to_plane_pixels",
    "plane_pixels_to_camera",
    "project_to_plane",
    "parallax_displacement",
    "pose_look_at",
    "WarpResult",
    "warp_homography",
    "warp_to_plane",
    "stabilize_sequence",
    "PoseFileError",
    "load_poses",
    "save_poses",
    "POSE_HEADER",
]

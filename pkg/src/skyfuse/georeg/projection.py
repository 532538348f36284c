"""
Analytic homographies between a camera image and the ground plane.

For a camera ``x ~ K (R X + t)`` and world points on the ground (Z = 0) the map
from plane coordinates (X, Y, 1) to the image is ``K [r1 r2 t]`` where r1
and r2 are the first two columns of R. Its inverse is written in closed
form with the minors of ``T = [r1 r2 t]`` so no generic matrix inversion is
needed per frame.
"""

import logging
from typing import Optional

import numpy as np

from ..core.errors import DegeneratePose, SingularMatrix
from ..core.homography import apply_homography, normalize_homography
from ..core.models import CameraPose, Homography
from .models import PlaneConfig, plane_to_world_matrix

logger = logging.getLogger(__name__)

# |lambda| below this fraction of f * |t| means the camera center is on the plane
DEGENERACY_TOLERANCE = 1e-12


def plane_basis(pose: CameraPose) -> np.ndarray:
    """The matrix T = [r1 r2 t] of a pose."""
    return np.column_stack([pose.R[:, 0], pose.R[:, 1], pose.t])


def _check_lambda(pose: CameraPose) -> float:
    lam = pose.lam
    if abs(lam) < DEGENERACY_TOLERANCE * pose.f * float(np.linalg.norm(pose.t)) or lam == 0.0:
        raise DegeneratePose(
            f"Camera center lies on the ground plane (lambda={lam:.3e}); "
            "no plane homography exists"
        )
    return lam


def raw_plane_to_camera(pose: CameraPose) -> np.ndarray:
    """Unnormalized ``K [r1 r2 t]``; its third output coordinate is the depth."""
    return pose.K @ plane_basis(pose)


def homography_plane_to_camera(pose: CameraPose) -> Homography:
    """
    Homography taking ground-plane points (X, Y, 1) to image pixels.

    Args:
        pose: Camera pose

    Returns:
        Normalized ``K [r1 r2 t]``

    Raises:
        SingularMatrix: If [r1 r2 t] is rank-deficient (camera center on the plane)

    Example:
        >>> pose = CameraPose.from_intrinsics(1000, 320, 240, np.eye(3), [0, 0, 500])
        >>> apply_homography(homography_plane_to_camera(pose), [[0.0, 0.0]])
        array([[320., 240.]])
    """
    try:
        _check_lambda(pose)
    except DegeneratePose as exc:
        raise SingularMatrix(str(exc)) from exc
    return normalize_homography(raw_plane_to_camera(pose))


def _minors(T: np.ndarray) -> np.ndarray:
    """m[i, j] = determinant of T with row i and column j removed."""
    m = np.empty((3, 3))
    for i in range(3):
        rows = [r for r in range(3) if r != i]
        for j in range(3):
            cols = [c for c in range(3) if c != j]
            sub = T[np.ix_(rows, cols)]
            m[i, j] = sub[0, 0] * sub[1, 1] - sub[0, 1] * sub[1, 0]
    return m


def minor_form_camera_to_plane(pose: CameraPose) -> np.ndarray:
    """
    Closed-form image-to-plane matrix from the minors of T, scaled by 1/lambda.

    With ``w = (u, v, f)`` the principal point and focal length of K, and
    ``m_ij`` the minors of T::

        row 1:  [ m11, -m21, (-m11,  m21,  m31) . w ]
        row 2:  [-m12,  m22, ( m12, -m22, -m32) . w ]
        row 3:  [ m13, -m23, (-m13,  m23,  m33) . w ]

    This is ``adj(T) @ [[1, 0, -u], [0, 1, -v], [0, 0, f]]``, which equals
    ``lambda * (K T)^-1`` with ``lambda = f * r3 . t``. The third row reduces
    to ``[r13, r23, f r33 - u r13 - v r23]``.
    """
    lam = _check_lambda(pose)
    m = _minors(plane_basis(pose))
    w = np.array([pose.u, pose.v, pose.f])
    H = np.array(
        [
            [m[0, 0], -m[1, 0], np.dot([-m[0, 0], m[1, 0], m[2, 0]], w)],
            [-m[0, 1], m[1, 1], np.dot([m[0, 1], -m[1, 1], -m[2, 1]], w)],
            [m[0, 2], -m[1, 2], np.dot([-m[0, 2], m[1, 2], m[2, 2]], w)],
        ]
    )
    return H / lam


def homography_camera_to_plane(pose: CameraPose) -> Homography:
    """
    Homography taking image pixels to ground-plane points (X, Y, 1).

    Computed with the closed-form minor expression (no matrix inversion).

    Raises:
        DegeneratePose: If |lambda| < 1e-12 * f * |t|
    """
    return normalize_homography(minor_form_camera_to_plane(pose))


def homography_camera_to_plane_generic(pose: CameraPose) -> Homography:
    """Reference inverse of ``K [r1 r2 t]`` computed as ``T^-1 K^-1``."""
    _check_lambda(pose)
    return normalize_homography(np.linalg.inv(plane_basis(pose)) @ np.linalg.inv(pose.K))


def camera_to_plane_pixels(pose: CameraPose, plane: PlaneConfig) -> Homography:
    """Full map from image pixels to plane-raster pixels."""
    world_to_pixels = np.linalg.inv(plane_to_world_matrix(plane))
    return normalize_homography(world_to_pixels @ minor_form_camera_to_plane(pose))


def plane_pixels_to_camera(pose: CameraPose, plane: PlaneConfig) -> np.ndarray:
    """Unnormalized map from plane-raster pixels to image pixels.

    The third homogeneous coordinate of the result is the camera depth of
    the ground point, so callers can reject points behind the camera.
    """
    _check_lambda(pose)
    return raw_plane_to_camera(pose) @ plane_to_world_matrix(plane)


def project_to_plane(point: np.ndarray, pose: CameraPose, plane: PlaneConfig) -> np.ndarray:
    """Project a 3D world point into the image, then map it onto the plane raster."""
    pixel = pose.project(np.asarray(point, dtype=np.float64).reshape(1, 3))
    return apply_homography(camera_to_plane_pixels(pose, plane), pixel)[0]


def parallax_displacement(
    point: np.ndarray, pose_a: CameraPose, pose_b: CameraPose, plane: PlaneConfig
) -> np.ndarray:
    """
    Apparent shift on the stabilized plane of a 3D point between two views.

    Each view projects the point into its image and maps that pixel onto the plane.
    Points on the ground (z = 0) land on the same plane pixel from every pose;
    off-plane points drift in proportion to their height.

    Args:
        point: World point (x, y, z) in meters
        pose_a: First camera pose
        pose_b: Second camera pose
        plane: Plane raster

    Returns:
        2-vector, plane pixels (b minus a)

    Raises:
        DegeneratePose: If either pose has its center on the plane
    """
    point = np.asarray(point, dtype=np.float64).reshape(3)
    if not np.all(np.isfinite(point)):
        raise ValueError("Point must be finite")
    return project_to_plane(point, pose_b, plane) - project_to_plane(point, pose_a, plane)


def pose_look_at(
    center: np.ndarray,
    target: np.ndarray,
    K: np.ndarray,
    up: Optional[np.ndarray] = None,
) -> CameraPose:
    """
    Camera at ``center`` with its optical axis through ``target``.

    Image x runs along ``forward x up`` and image y along ``forward x right``,
    so a nadir camera (looking down -Z) has R = diag(1, -1, -1): image
    columns follow +X and image rows follow -Y, matching the north-up plane
    raster.
    """
    center = np.asarray(center, dtype=np.float64).reshape(3)
    forward = np.asarray(target, dtype=np.float64).reshape(3) - center
    norm = np.linalg.norm(forward)
    if norm == 0.0:
        raise DegeneratePose("Camera center and look-at target coincide")
    forward /= norm
    up_vector = np.array([0.0, 0.0, 1.0]) if up is None else np.asarray(up, dtype=np.float64)
    right = np.cross(forward, up_vector)
    if np.linalg.norm(right) < 1e-9:
        right = np.array([1.0, 0.0, 0.0])
        right -= forward * float(forward @ right)
    right /= np.linalg.norm(right)
    down = np.cross(forward, right)
    R = np.vstack([right, down, forward])
    return CameraPose(K=np.asarray(K, dtype=np.float64), R=R, t=-R @ center)

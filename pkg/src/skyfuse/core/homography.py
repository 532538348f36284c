"""
Canonical scaling and point mapping for 3x3 homographies.
"""

from typing import Union

import numpy as np

from .errors import SingularMatrix
from .models import Homography


def normalize_homography(H: np.ndarray) -> Homography:
    """
    Bring an up-to-scale 3x3 matrix to canonical form.

    The result is proportional to ``H`` and its largest-magnitude entry is
    +1, so ``normalize_homography(s * H) == normalize_homography(H)`` for any
    nonzero ``s``.

    Args:
        H: 3x3 matrix

    Returns:
        Homography in canonical scale

    Raises:
        SingularMatrix: If det(H) is zero

    Example:
        >>> normalize_homography(2 * np.eye(3)).matrix
        array([[1., 0., 0.],
               [0., 1., 0.],
               [0., 0., 1.]])
    """
    matrix = np.asarray(H, dtype=np.float64)
    if matrix.shape != (3, 3):
        raise ValueError(f"Expected a 3x3 matrix, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)) or np.linalg.det(matrix) == 0.0:
        raise SingularMatrix("Cannot normalize a singular matrix")
    return Homography(matrix)


def apply_homography(H: Union[Homography, np.ndarray], points: np.ndarray) -> np.ndarray:
    """Map (N, 2) points through a Homography or a raw 3x3 matrix; returns (N, 2)."""
    matrix = H.matrix if isinstance(H, Homography) else np.asarray(H, dtype=np.float64)
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    homogeneous = np.hstack([pts, np.ones((pts.shape[0], 1))])
    mapped = homogeneous @ matrix.T
    return mapped[:, :2] / mapped[:, 2:3]

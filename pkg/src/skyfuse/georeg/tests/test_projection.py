"""
Tests for the analytic plane homographies, parallax and look-at poses.
"""

import numpy as np
import pytest
from scipy.spatial.transform import Rotation

from skyfuse.core import (
    CameraPose,
    DegeneratePose,
    Homography,
    SingularMatrix,
    apply_homography,
    normalize_homography,
)
from skyfuse.georeg import (
    PlaneConfig,
    camera_to_plane_pixels,
    homography_camera_to_plane,
    homography_camera_to_plane_generic,
    homography_plane_to_camera,
    parallax_displacement,
    pose_look_at,
)


def random_pose(rng: np.random.Generator) -> CameraPose:
    """A camera above the plane with arbitrary orientation and intrinsics."""
    R = Rotation.random(random_state=rng).as_matrix()
    center = np.array(
        [rng.uniform(-2000, 2000), rng.uniform(-2000, 2000), rng.uniform(500, 3000)]
    )
    f = rng.uniform(500, 2000)
    u, v = rng.uniform(100, 1000, size=2)
    return CameraPose.from_intrinsics(f, u, v, R, -R @ center)


@pytest.fixture
def nadir():
    """R = I camera at height h above the plane (f, u, v, h)."""
    f, u, v, h = 1000.0, 320.0, 240.0, 500.0
    return f, u, v, h, CameraPose.from_intrinsics(f, u, v, np.eye(3), [0.0, 0.0, h])


class TestPlaneToCamera:
    """Test H = K [r1 r2 t]."""

    def test_nadir_symbolic(self, nadir):
        """Test the nadir pose against the symbolic product."""
        f, u, v, h, pose = nadir
        expected = normalize_homography(
            np.array([[f, 0.0, u * h], [0.0, f, v * h], [0.0, 0.0, h]])
        )
        assert homography_plane_to_camera(pose).max_abs_difference(expected) < 1e-12

    def test_origin_hits_principal_point(self, nadir):
        """Test the plane origin maps to (u, v)."""
        f, u, v, h, pose = nadir
        mapped = apply_homography(homography_plane_to_camera(pose), np.array([[0.0, 0.0]]))
        np.testing.assert_allclose(mapped, [[u, v]], atol=1e-9)

    def test_matches_full_projection(self):
        """Test H x equals K (R X + t) for random plane points."""
        rng = np.random.default_rng(1)
        for _ in range(10):
            pose = random_pose(rng)
            H = homography_plane_to_camera(pose)
            xy = rng.uniform(-500, 500, size=(100, 2))
            world = np.column_stack([xy, np.zeros(100)])
            np.testing.assert_allclose(
                apply_homography(H, xy), pose.project(world), rtol=1e-7, atol=1e-6
            )

    def test_camera_on_plane_is_singular(self):
        """Test a camera centered on the plane raises SingularMatrix."""
        K = np.array([[800.0, 0.0, 100.0], [0.0, 800.0, 100.0], [0.0, 0.0, 1.0]])
        pose = pose_look_at([100.0, 0.0, 0.0], [0.0, 0.0, 0.0], K)
        with pytest.raises(SingularMatrix):
            homography_plane_to_camera(pose)


class TestCameraToPlane:
    """Test the closed-form inverse."""

    def test_nadir_inverse(self, nadir):
        """Test the nadir pose against the direct 3x3 inverse."""
        f, u, v, h, pose = nadir
        expected = normalize_homography(
            np.array([[1 / f, 0.0, -u / f], [0.0, 1 / f, -v / f], [0.0, 0.0, 1 / h]])
        )
        assert homography_camera_to_plane(pose).max_abs_difference(expected) < 1e-12

    def test_composition_is_identity(self):
        """Test camera_to_plane @ plane_to_camera normalizes to I."""
        rng = np.random.default_rng(2)
        for _ in range(20):
            pose = random_pose(rng)
            product = homography_camera_to_plane(pose) @ homography_plane_to_camera(pose)
            assert product.max_abs_difference(Homography.identity()) < 1e-9

    def test_minor_form_matches_generic_inverse(self):
        """Test 1000 random poses: closed form equals generic inversion."""
        rng = np.random.default_rng(3)
        worst = 0.0
        for _ in range(1000):
            pose = random_pose(rng)
            closed = homography_camera_to_plane(pose)
            generic = homography_camera_to_plane_generic(pose)
            worst = max(worst, closed.max_abs_difference(generic))
        assert worst < 1e-9

    def test_degenerate_pose(self):
        """Test a camera center on the plane raises DegeneratePose."""
        K = np.array([[800.0, 0.0, 100.0], [0.0, 800.0, 100.0], [0.0, 0.0, 1.0]])
        pose = pose_look_at([0.0, 250.0, 0.0], [0.0, 0.0, 0.0], K)
        with pytest.raises(DegeneratePose):
            homography_camera_to_plane(pose)

    def test_on_plane_points_agree_across_poses(self):
        """Test checkerboard corners land on the same plane pixel from two orbit poses."""
        K = np.array([[1200.0, 0.0, 320.0], [0.0, 1200.0, 240.0], [0.0, 0.0, 1.0]])
        plane = PlaneConfig.centered(400, 400, 0.25)
        pose_a = pose_look_at([1500.0, 0.0, 1500.0], [0.0, 0.0, 0.0], K)
        pose_b = pose_look_at(
            [1500.0 * np.cos(0.3), 1500.0 * np.sin(0.3), 1500.0], [0.0, 0.0, 0.0], K
        )
        gx, gy = np.meshgrid(np.arange(-20.0, 21.0, 5.0), np.arange(-20.0, 21.0, 5.0))
        corners = np.column_stack([gx.ravel(), gy.ravel(), np.zeros(gx.size)])
        expected = plane.world_to_pixels(corners[:, :2])
        for pose in (pose_a, pose_b):
            mapped = apply_homography(camera_to_plane_pixels(pose, plane), pose.project(corners))
            np.testing.assert_allclose(mapped, expected, atol=1e-6)


class TestParallax:
    """Test parallax_displacement."""

    @pytest.fixture
    def pose_pair(self):
        """Two nadir cameras at 1500 m, 100 m apart."""
        K = np.array([[1000.0, 0.0, 256.0], [0.0, 1000.0, 256.0], [0.0, 0.0, 1.0]])
        pose_a = pose_look_at([0.0, 0.0, 1500.0], [0.0, 0.0, 0.0], K)
        pose_b = pose_look_at([100.0, 0.0, 1500.0], [100.0, 0.0, 0.0], K)
        return pose_a, pose_b

    def test_on_plane_point_has_no_parallax(self):
        """Test z = 0 gives (0, 0) for arbitrary poses."""
        rng = np.random.default_rng(4)
        plane = PlaneConfig.centered(512, 512, 0.5)
        for _ in range(20):
            point = [rng.uniform(-50, 50), rng.uniform(-50, 50), 0.0]
            shift = parallax_displacement(point, random_pose(rng), random_pose(rng), plane)
            np.testing.assert_allclose(shift, [0.0, 0.0], atol=1e-5)

    def test_grows_with_height(self, pose_pair):
        """Test displacement magnitude increases strictly with height."""
        plane = PlaneConfig.centered(512, 512, 0.25)
        magnitudes = [
            np.linalg.norm(parallax_displacement([10.0, 5.0, z], *pose_pair, plane))
            for z in (5.0, 10.0, 20.0, 40.0, 80.0)
        ]
        assert all(a < b for a, b in zip(magnitudes, magnitudes[1:]))

    def test_off_plane_point_is_nonzero(self, pose_pair):
        """Test a point just above the plane shows parallax."""
        plane = PlaneConfig.centered(512, 512, 0.25)
        assert np.linalg.norm(parallax_displacement([0.0, 0.0, 1.0], *pose_pair, plane)) > 1e-6

    def test_ray_intersection_oracle(self, pose_pair):
        """Test h=1500 m, baseline 100 m, z=50 m against ray/plane intersection."""
        plane = PlaneConfig.centered(512, 512, 0.25)
        point = np.array([0.0, 0.0, 50.0])

        def footprint(pose):
            center = pose.center
            hit = center + (point - center) * center[2] / (center[2] - point[2])
            return plane.world_to_pixels(hit[:2])[0]

        expected = footprint(pose_pair[1]) - footprint(pose_pair[0])
        shift = parallax_displacement(point, *pose_pair, plane)
        np.testing.assert_allclose(shift, expected, atol=1e-6)
        assert shift[0] == pytest.approx((100.0 - 100.0 * 1500.0 / 1450.0) / 0.25, rel=1e-7)
        assert shift[1] == pytest.approx(0.0, abs=1e-9)


class TestLookAt:
    """Test pose_look_at."""

    def test_nadir_rotation(self):
        """Test a camera straight above the target gets R = diag(1, -1, -1)."""
        pose = pose_look_at([3.0, 4.0, 100.0], [3.0, 4.0, 0.0], np.eye(3))
        np.testing.assert_allclose(pose.R, np.diag([1.0, -1.0, -1.0]), atol=1e-12)
        np.testing.assert_allclose(pose.center, [3.0, 4.0, 100.0], atol=1e-9)

    def test_target_projects_to_principal_point(self):
        """Test the look-at target lands on (u, v)."""
        K = np.array([[900.0, 0.0, 160.0], [0.0, 900.0, 120.0], [0.0, 0.0, 1.0]])
        pose = pose_look_at([1200.0, -300.0, 1500.0], [10.0, 20.0, 0.0], K)
        np.testing.assert_allclose(pose.project(np.array([[10.0, 20.0, 0.0]])), [[160.0, 120.0]])

    def test_coincident_target_rejected(self):
        """Test center == target raises DegeneratePose."""
        with pytest.raises(DegeneratePose):
            pose_look_at([1.0, 1.0, 1.0], [1.0, 1.0, 1.0], np.eye(3))

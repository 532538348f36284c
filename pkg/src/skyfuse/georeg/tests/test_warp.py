"""
Tests for homography warping, stabilization and pose files.
"""

import numpy as np
import pytest

from skyfuse.core import DimensionMismatch, EmptySequence, Frame, Homography
from skyfuse.georeg import (
    POSE_HEADER,
    PlaneConfig,
    PoseFileError,
    camera_to_plane_pixels,
    load_poses,
    pose_look_at,
    save_poses,
    stabilize_sequence,
    warp_homography,
    warp_to_plane,
)


def intrinsics(f: float, u: float, v: float) -> np.ndarray:
    return np.array([[f, 0.0, u], [0.0, f, v], [0.0, 0.0, 1.0]])


@pytest.fixture
def checkerboard():
    """40x40 plane image with 4 px squares."""
    rows, cols = np.mgrid[0:40, 0:40]
    return Frame(np.where((rows // 4 + cols // 4) % 2 == 0, 0.2, 0.8))


class TestWarpHomography:
    """Test the bilinear warp core."""

    def test_identity_equivalent_configuration(self):
        """Test a plane grid matched to a nadir camera reproduces the input."""
        f, u, v, h = 200.0, 11.0, 9.0, 400.0
        rng = np.random.default_rng(0)
        frame = Frame(rng.uniform(0, 1, size=(20, 24, 3)))
        pose = pose_look_at([0.0, 0.0, h], [0.0, 0.0, 0.0], intrinsics(f, u, v))
        plane = PlaneConfig(
            output_width=24,
            output_height=20,
            plane_scale=h / f,
            plane_origin=(-u * h / f, v * h / f),
        )
        result = warp_to_plane(frame, pose, plane)
        assert result.valid.count() == 24 * 20
        np.testing.assert_allclose(result.frame.data, frame.data, atol=1e-9)

    def test_translated_ramp(self):
        """Test a 3.5 px shift of a linear ramp is exact under bilinear sampling."""
        width = 40
        ramp = np.tile(np.arange(width) / width, (10, 1))
        frame = Frame(ramp)
        shift = Homography(np.array([[1.0, 0.0, -3.5], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]))
        result = warp_homography(frame, shift, width, 10)
        cols = np.arange(width)
        valid_cols = cols >= 4
        np.testing.assert_array_equal(result.valid.bits[0], valid_cols)
        np.testing.assert_allclose(
            result.frame.data[0, valid_cols, 0], (cols[valid_cols] - 3.5) / width, atol=1e-6
        )
        assert np.all(result.frame.data[:, ~valid_cols, :] == 0.0)

    def test_range_preserved(self):
        """Test warped intensities stay inside [0, 1]."""
        rng = np.random.default_rng(1)
        frame = Frame(rng.uniform(0, 1, size=(48, 64, 3)))
        pose = pose_look_at([300.0, -200.0, 1500.0], [0.0, 0.0, 0.0], intrinsics(1500.0, 32, 24))
        result = warp_to_plane(frame, pose, PlaneConfig.centered(64, 64, 1.0))
        assert result.frame.data.min() >= 0.0
        assert result.frame.data.max() <= 1.0

    def test_two_orbit_positions_coincide(self, checkerboard):
        """Test on-plane texture seen from two shifted nadir cameras aligns exactly."""
        plane = PlaneConfig.centered(40, 40, 1.0)
        K = intrinsics(100.0, 19.5, 19.5)
        warped = []
        for cx, cy in ((0.0, 0.0), (5.0, -3.0)):
            pose = pose_look_at([cx, cy, 100.0], [cx, cy, 0.0], K)
            camera = warp_homography(checkerboard, camera_to_plane_pixels(pose, plane), 40, 40)
            warped.append(warp_to_plane(camera.frame, pose, plane))
        both = warped[0].valid.bits & warped[1].valid.bits
        assert both.sum() > 30 * 30
        np.testing.assert_allclose(
            warped[0].frame.data[both], warped[1].frame.data[both], atol=1e-9
        )
        np.testing.assert_allclose(warped[1].frame.data[both], checkerboard.data[both], atol=1e-9)


class TestStabilizeSequence:
    """Test sequence stabilization."""

    def test_jobs_do_not_change_output(self, checkerboard):
        """Test parallel and serial warps agree and keep order."""
        plane = PlaneConfig.centered(40, 40, 1.0)
        K = intrinsics(100.0, 19.5, 19.5)
        poses = [pose_look_at([x, 0.0, 100.0], [x, 0.0, 0.0], K) for x in (0.0, 1.0, 2.0, 3.0)]
        frames = [checkerboard.with_index(i) for i in range(4)]
        serial = stabilize_sequence(frames, poses, plane, jobs=1)
        parallel = stabilize_sequence(frames, poses, plane, jobs=3)
        for a, b in zip(serial, parallel):
            assert a.frame.index == b.frame.index
            np.testing.assert_array_equal(a.frame.data, b.frame.data)
            assert a.valid == b.valid

    def test_count_mismatch(self, checkerboard):
        """Test frame/pose count mismatch raises DimensionMismatch."""
        with pytest.raises(DimensionMismatch):
            stabilize_sequence([checkerboard], [], PlaneConfig.centered(8, 8, 1.0))

    def test_empty(self):
        """Test an empty sequence raises EmptySequence."""
        with pytest.raises(EmptySequence):
            stabilize_sequence([], [], PlaneConfig.centered(8, 8, 1.0))


class TestPoseFile:
    """Test pose file reading and writing."""

    def test_round_trip(self, tmp_path):
        """Test save then load restores every pose exactly."""
        K = intrinsics(1200.0, 320.0, 240.0)
        poses = {
            i: pose_look_at([1500.0 * np.cos(i), 1500.0 * np.sin(i), 1500.0], [0, 0, 0], K)
            for i in range(3)
        }
        loaded = load_poses(save_poses(poses, tmp_path / "poses.csv"))
        assert list(loaded) == [0, 1, 2]
        for i in range(3):
            np.testing.assert_array_equal(loaded[i].R, poses[i].R)
            np.testing.assert_array_equal(loaded[i].t, poses[i].t)
            assert loaded[i].f == 1200.0

    def test_missing_file(self, tmp_path):
        """Test a missing pose file raises PoseFileError."""
        with pytest.raises(PoseFileError):
            load_poses(tmp_path / "absent.csv")

    def test_wrong_field_count_reports_line(self, tmp_path):
        """Test malformed rows name their line number."""
        path = tmp_path / "poses.csv"
        good = "0,1000,320,240,1,0,0,0,1,0,0,0,1,0,0,500"
        path.write_text(",".join(POSE_HEADER) + "\n" + good + "\n1,1000,320\n")
        with pytest.raises(PoseFileError) as exc_info:
            load_poses(path)
        assert exc_info.value.line == 3

    def test_invalid_rotation(self, tmp_path):
        """Test a non-orthonormal rotation is rejected with its line."""
        path = tmp_path / "poses.csv"
        path.write_text(",".join(POSE_HEADER) + "\n0,1000,320,240,2,0,0,0,1,0,0,0,1,0,0,500\n")
        with pytest.raises(PoseFileError) as exc_info:
            load_poses(path)
        assert exc_info.value.line == 2

    def test_duplicate_index(self, tmp_path):
        """Test a repeated frame index is rejected."""
        row = "4,1000,320,240,1,0,0,0,1,0,0,0,1,0,0,500"
        path = tmp_path / "poses.csv"
        path.write_text(",".join(POSE_HEADER) + f"\n{row}\n{row}\n")
        with pytest.raises(PoseFileError, match="duplicate"):
            load_poses(path)

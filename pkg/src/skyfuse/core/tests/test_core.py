"""
Tests for core domain types, homography normalization and image I/O.
"""

import numpy as np
import pytest
import cv2

from skyfuse.core import (
    BBox,
    BinaryMask,
    CameraPose,
    Category,
    DetectionSet,
    Frame,
    Homography,
    SequenceConfig,
    SingularMatrix,
    ThresholdMode,
    UnreadableImage,
    UnsupportedBitDepth,
    apply_homography,
    frame_filename,
    frame_index_from_name,
    list_sequence,
    load_frame,
    load_mask,
    load_trace,
    luminance,
    normalize_homography,
    save_frame,
    save_mask,
    save_trace,
)


class TestFrame:
    """Test Frame validation."""

    def test_gray_frame_gets_channel_axis(self):
        """Test that a 2D array becomes a 1-channel frame."""
        frame = Frame(np.zeros((4, 5)))
        assert frame.channels == 1
        assert frame.width == 5
        assert frame.height == 4

    def test_data_length_matches_dimensions(self):
        """Test data length equals width * height * channels."""
        frame = Frame(np.full((3, 4, 3), 0.5))
        assert frame.data.size == frame.width * frame.height * frame.channels

    def test_out_of_range_rejected(self):
        """Test that intensities above 1 are rejected."""
        with pytest.raises(ValueError):
            Frame(np.full((2, 2), 1.5))

    def test_non_finite_rejected(self):
        """Test that NaN intensities are rejected."""
        data = np.zeros((2, 2))
        data[0, 0] = np.nan
        with pytest.raises(ValueError):
            Frame(data)

    def test_two_channels_rejected(self):
        """Test that only 1 or 3 channels are allowed."""
        with pytest.raises(ValueError):
            Frame(np.zeros((2, 2, 2)))

    def test_data_is_read_only(self):
        """Test that frames are immutable after construction."""
        frame = Frame(np.zeros((2, 2)))
        with pytest.raises(ValueError):
            frame.data[0, 0, 0] = 1.0


class TestNormalizeHomography:
    """Test canonical homography scaling."""

    def test_scaled_identity(self):
        """Test 2*I normalizes to I."""
        H = normalize_homography(2.0 * np.eye(3))
        np.testing.assert_allclose(H.matrix, np.eye(3))

    def test_identity_is_fixed_point(self):
        """Test I normalizes to itself."""
        np.testing.assert_allclose(normalize_homography(np.eye(3)).matrix, np.eye(3))

    def test_negative_peak_entry(self):
        """Test division by the signed largest-magnitude entry."""
        M = np.array([[0.0, 0.0, 3.0], [-6.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
        H = normalize_homography(M)
        np.testing.assert_allclose(H.matrix, M / -6.0)
        assert H.matrix[1, 0] == 1.0

    def test_scale_invariance(self):
        """Test normalize(s*H) == normalize(H) for several s."""
        rng = np.random.default_rng(7)
        M = rng.normal(size=(3, 3))
        reference = normalize_homography(M)
        for s in (-3.0, 0.25, 1e4, -1e-3):
            assert normalize_homography(s * M).max_abs_difference(reference) < 1e-12

    def test_singular_matrix(self):
        """Test that a rank-deficient matrix raises SingularMatrix."""
        with pytest.raises(SingularMatrix):
            normalize_homography(np.ones((3, 3)))

    def test_apply_maps_points(self):
        """Test point mapping through a translation homography."""
        H = Homography(np.array([[1.0, 0.0, 2.0], [0.0, 1.0, -1.0], [0.0, 0.0, 1.0]]))
        np.testing.assert_allclose(apply_homography(H, np.array([[0.0, 0.0]])), [[2.0, -1.0]])
        np.testing.assert_allclose(apply_homography(2 * H.matrix, [[1.0, 1.0]]), [[3.0, 0.0]])


class TestCameraPose:
    """Test CameraPose invariants."""

    def test_valid_pose(self):
        """Test that a nadir pose is accepted and exposes lambda."""
        pose = CameraPose.from_intrinsics(1000.0, 320.0, 240.0, np.eye(3), [0.0, 0.0, 100.0])
        assert pose.lam == pytest.approx(1000.0 * 100.0)
        np.testing.assert_allclose(pose.center, [0.0, 0.0, -100.0])

    def test_non_orthonormal_rotation(self):
        """Test that a scaled rotation is rejected."""
        with pytest.raises(ValueError):
            CameraPose.from_intrinsics(1000.0, 0.0, 0.0, 2.0 * np.eye(3), [0, 0, 1])

    def test_reflection_rejected(self):
        """Test that det(R) = -1 is rejected."""
        with pytest.raises(ValueError):
            CameraPose.from_intrinsics(1000.0, 0.0, 0.0, np.diag([1.0, 1.0, -1.0]), [0, 0, 1])

    def test_nonpositive_focal_length(self):
        """Test that f <= 0 is rejected."""
        with pytest.raises(ValueError):
            CameraPose.from_intrinsics(0.0, 0.0, 0.0, np.eye(3), [0, 0, 1])

    def test_principal_ray_hits_principal_point(self):
        """Test that a point on the optical axis projects to (u, v)."""
        pose = CameraPose.from_intrinsics(500.0, 10.0, 20.0, np.eye(3), [0.0, 0.0, 50.0])
        np.testing.assert_allclose(pose.project(np.array([[0.0, 0.0, 0.0]])), [[10.0, 20.0]])


class TestBBoxAndDetectionSet:
    """Test box helpers and detection grouping."""

    def test_zero_size_rejected(self):
        """Test w, h must be positive."""
        with pytest.raises(ValueError):
            BBox(0, 0, 0, 2)

    def test_iou(self):
        """Test IoU of two half-overlapping boxes."""
        a = BBox(0, 0, 2, 2)
        b = BBox(1, 0, 2, 2)
        assert a.iou(b) == pytest.approx(2.0 / 6.0)

    def test_clamp_inside_and_outside(self):
        """Test clamping partially and fully outside boxes."""
        assert BBox(-1, -1, 3, 3).clamp(4, 4) == BBox(0, 0, 2, 2)
        assert BBox(10, 10, 2, 2).clamp(4, 4) is None

    def test_duplicates_collapse(self):
        """Test identical boxes are deduplicated."""
        box = BBox(1, 2, 3, 4, Category.VEHICLE, 0.9, frame_index=3)
        dets = DetectionSet.from_boxes([box, box])
        assert len(dets) == 1
        assert dets.for_frame(3) == (box,)
        assert dets.for_frame(4) == ()

    def test_order_independent(self):
        """Test that input order does not change the set."""
        boxes = [BBox(i, 0, 1, 1, frame_index=i % 2) for i in range(6)]
        assert DetectionSet.from_boxes(boxes) == DetectionSet.from_boxes(reversed(boxes))


class TestSequenceConfig:
    """Test SequenceConfig validation."""

    def test_defaults(self):
        """Test documented defaults."""
        config = SequenceConfig()
        assert config.temporal_window == 5
        assert config.integration_radius == 2
        assert config.trace_threshold_mode == ThresholdMode.percentile(99)

    def test_even_window_rejected(self):
        """Test that an even temporal window is rejected."""
        with pytest.raises(ValueError):
            SequenceConfig(temporal_window=4)

    def test_threshold_parse(self):
        """Test threshold mode parsing from CLI text."""
        assert ThresholdMode.parse("fixed:0.01") == ThresholdMode.fixed(0.01)
        assert ThresholdMode.parse("otsu") == ThresholdMode.otsu()
        with pytest.raises(ValueError):
            ThresholdMode.parse("median:3")


class TestImageIO:
    """Test frame, mask and trace file I/O."""

    def test_black_png(self, tmp_path):
        """Test a 2x2 black PNG loads as all zeros."""
        path = tmp_path / "black.png"
        cv2.imwrite(str(path), np.zeros((2, 2, 3), dtype=np.uint8))
        frame = load_frame(path)
        assert frame.channels == 3
        assert np.all(frame.data == 0.0)

    def test_scale_endpoints(self, tmp_path):
        """Test 255 -> 1.0 and 128 -> 128/255."""
        path = tmp_path / "gray.png"
        cv2.imwrite(str(path), np.array([[255, 128]], dtype=np.uint8))
        frame = load_frame(path)
        assert frame.channels == 1
        assert frame.data[0, 0, 0] == 1.0
        assert frame.data[0, 1, 0] == 128 / 255

    def test_rgb_channel_order(self, tmp_path):
        """Test that a red pixel stays in channel 0."""
        frame = Frame(np.array([[[1.0, 0.0, 0.0]]]))
        loaded = load_frame(save_frame(frame, tmp_path / "red.png"))
        np.testing.assert_array_equal(loaded.data, frame.data)

    def test_lossless_round_trip(self, tmp_path):
        """Test load -> save -> load is bit-identical for PNG."""
        rng = np.random.default_rng(0)
        path = tmp_path / "noise.png"
        cv2.imwrite(str(path), rng.integers(0, 256, (8, 9, 3), dtype=np.uint8))
        first = load_frame(path)
        second = load_frame(save_frame(first, tmp_path / "copy.png"))
        np.testing.assert_array_equal(first.data, second.data)

    def test_missing_file(self, tmp_path):
        """Test that a missing file raises UnreadableImage."""
        with pytest.raises(UnreadableImage):
            load_frame(tmp_path / "absent.png")

    def test_sixteen_bit_rejected(self, tmp_path):
        """Test that 16-bit images raise UnsupportedBitDepth."""
        path = tmp_path / "deep.png"
        cv2.imwrite(str(path), np.zeros((2, 2), dtype=np.uint16))
        with pytest.raises(UnsupportedBitDepth):
            load_frame(path)

    def test_gray_alpha_drops_alpha(self, tmp_path, monkeypatch):
        """Test a gray+alpha decode keeps the gray channel as a 1-channel frame."""
        path = tmp_path / "ga.png"
        path.write_bytes(b"png")
        pixels = np.stack([np.full((2, 3), 255, np.uint8), np.zeros((2, 3), np.uint8)], axis=2)
        monkeypatch.setattr(cv2, "imread", lambda *args: pixels)
        frame = load_frame(path)
        assert frame.channels == 1
        assert np.all(frame.data == 1.0)

    def test_unsupported_channel_count(self, tmp_path, monkeypatch):
        """Test a 5-channel decode raises UnreadableImage naming the file."""
        path = tmp_path / "odd.png"
        path.write_bytes(b"png")
        monkeypatch.setattr(cv2, "imread", lambda *args: np.zeros((2, 2, 5), np.uint8))
        with pytest.raises(UnreadableImage, match="odd.png"):
            load_frame(path)

    def test_mask_round_trip(self, tmp_path):
        """Test masks survive save/load."""
        mask = BinaryMask(np.eye(4, dtype=bool))
        assert load_mask(save_mask(mask, tmp_path / "m.png")) == mask

    def test_trace_round_trip(self, tmp_path):
        """Test 16-bit trace storage within quantization error."""
        values = np.linspace(0.0, 3.0, 20).reshape(4, 5)
        restored = load_trace(save_trace(values, tmp_path / "trace.png"))
        np.testing.assert_allclose(restored, values, atol=3.0 / 65535)
        assert (tmp_path / "trace.scale.txt").is_file()

    def test_luminance_weights(self):
        """Test luma of pure red is 0.299."""
        gray = luminance(Frame(np.array([[[1.0, 0.0, 0.0]]])))
        assert gray.channels == 1
        assert gray.data[0, 0, 0] == pytest.approx(0.299)

    def test_sequence_listing(self, tmp_path):
        """Test frames are indexed by the trailing number of their names."""
        frame = Frame(np.zeros((2, 2, 3)))
        for index in (10, 2):
            save_frame(frame, tmp_path / frame_filename(index))
        (tmp_path / "notes.txt").write_text("skip me")
        files = list_sequence(tmp_path)
        assert list(files) == [2, 10]
        assert files[2].name == "frame_0002.png"

    def test_frame_index_from_name(self):
        """Test plain and prefixed names, and a name without digits."""
        assert frame_index_from_name("0007.jpg") == 7
        assert frame_index_from_name("frame_0031.png") == 31
        with pytest.raises(UnreadableImage):
            frame_index_from_name("cover.png")

    def test_duplicate_index(self, tmp_path):
        """Test two files with one index are rejected."""
        frame = Frame(np.zeros((2, 2, 3)))
        save_frame(frame, tmp_path / "a_3.png")
        save_frame(frame, tmp_path / "b_003.png")
        with pytest.raises(UnreadableImage):
            list_sequence(tmp_path)

"""
Tests for detection ingest and rasterization.
"""

import numpy as np
import pytest

from skyfuse.core import BBox, Category, DetectionSet, Homography
from skyfuse.appearance import (
    DETECTION_HEADER,
    DetectionParseError,
    load_categorized,
    load_detections,
    load_ground_truth,
    rasterize_detections,
    warp_bbox,
    write_detections,
)

HEADER = ",".join(DETECTION_HEADER)


@pytest.fixture
def detection_file(tmp_path):
    """Write detection rows after the header and return the path."""

    def _write(*rows):
        path = tmp_path / "detections.csv"
        path.write_text("\n".join([HEADER, *rows]) + "\n")
        return path

    return _write


def brute_force_mask(boxes, width, height):
    """Per-pixel membership of pixel centers."""
    bits = np.zeros((height, width), dtype=bool)
    for r in range(height):
        for c in range(width):
            for b in boxes:
                if b.x <= c + 0.5 < b.x + b.w and b.y <= r + 0.5 < b.y + b.h:
                    bits[r, c] = True
    return bits


class TestLoadDetections:
    """Test load_detections."""

    def test_empty_file(self, tmp_path):
        """Test an empty file yields an empty set."""
        path = tmp_path / "empty.csv"
        path.write_text("")
        assert len(load_detections(path)) == 0

    def test_header_only(self, detection_file):
        """Test a header-only file yields an empty set."""
        assert len(load_detections(detection_file())) == 0

    def test_filter_and_merge(self, detection_file):
        """Test car 0.9, boat 0.8, van 0.4 with min_conf 0.5 keeps only the car."""
        path = detection_file(
            "0,car,0.9,10,10,4,2",
            "0,boat,0.8,20,20,6,3",
            "0,van,0.4,30,30,5,2",
        )
        dets = load_detections(path, {"car", "pick-up", "van"}, 0.5)
        assert len(dets) == 1
        (box,) = dets.for_frame(0)
        assert box == BBox(10, 10, 4, 2, Category.VEHICLE, 0.9, 0)
        assert dets.unknown_labels == {"boat": 1}

    def test_duplicates_collapse(self, detection_file):
        """Test identical rows are deduplicated."""
        path = detection_file("3,car,0.9,1,2,3,4", "3,car,0.9,1,2,3,4")
        assert len(load_detections(path)) == 1

    def test_order_independent(self, detection_file, tmp_path):
        """Test permuted lines give an identical set."""
        rows = ["0,car,0.9,1,2,3,4", "1,van,0.7,5,5,2,2", "0,pick-up,0.6,8,1,3,3"]
        first = load_detections(detection_file(*rows))
        second = load_detections(detection_file(*reversed(rows)))
        assert first == second

    def test_case_insensitive_classes(self, detection_file):
        """Test class names match regardless of case."""
        assert len(load_detections(detection_file("0,Car,0.9,1,1,2,2"))) == 1

    def test_parse_error_line_number(self, detection_file):
        """Test a malformed row reports its 1-based line."""
        path = detection_file("0,car,0.9,1,1,2,2", "1,car,high,1,1,2,2")
        with pytest.raises(DetectionParseError) as exc_info:
            load_detections(path)
        assert exc_info.value.line == 3

    def test_nonpositive_size_rejected(self, detection_file):
        """Test w = 0 is a parse error."""
        with pytest.raises(DetectionParseError):
            load_detections(detection_file("0,car,0.9,1,1,0,2"))

    def test_negative_frame_rejected(self, detection_file):
        """Test negative frame indices are a parse error."""
        with pytest.raises(DetectionParseError):
            load_detections(detection_file("-1,car,0.9,1,1,2,2"))

    def test_bad_header(self, tmp_path):
        """Test a wrong header is reported on line 1."""
        path = tmp_path / "bad.csv"
        path.write_text("a,b,c\n")
        with pytest.raises(DetectionParseError) as exc_info:
            load_detections(path)
        assert exc_info.value.line == 1

    def test_ground_truth(self, detection_file):
        """Test GT files load as GroundTruth at any confidence."""
        dets = load_ground_truth(detection_file("2,GT,0,1,1,2,2"))
        assert [b.category for b in dets] == [Category.GROUND_TRUTH]


class TestWriteDetections:
    """Test the detection writer."""

    def test_categorized_round_trip(self, tmp_path):
        """Test categorized boxes survive write and load."""
        boxes = [
            BBox(1, 2, 3, 4, Category.MOVING_VEHICLE, 1.0, 0),
            BBox(5.5, 6, 7, 8, Category.BUILDING, 1.0, 2),
        ]
        path = write_detections(boxes, tmp_path / "categorized.csv")
        assert load_categorized(path) == DetectionSet.from_boxes(boxes)
        assert path.read_text().splitlines()[0] == HEADER

    def test_unknown_category_line_number(self, detection_file):
        """Test a categorized file reports the line of a class that is not a category."""
        path = detection_file("0,MovingVehicle,1,1,1,2,2", "", "2,truck,1,1,1,2,2")
        with pytest.raises(DetectionParseError) as exc_info:
            load_categorized(path)
        assert exc_info.value.line == 4
        assert "line 4" in str(exc_info.value)


class TestRasterize:
    """Test rasterize_detections."""

    def test_no_detections(self):
        """Test frames without detections give all-false masks."""
        mask = rasterize_detections(DetectionSet(), 7, 5, 4)
        assert mask.shape == (4, 5)
        assert mask.count() == 0

    def test_area(self):
        """Test box (0,0,2,2) in a 4x4 frame covers exactly 4 pixels."""
        dets = DetectionSet.from_boxes([BBox(0, 0, 2, 2)])
        mask = rasterize_detections(dets, 0, 4, 4)
        assert mask.count() == 4
        assert mask.bits[:2, :2].all()

    def test_overlapping_union(self):
        """Test two overlapping boxes cover their union area."""
        boxes = [BBox(1, 1, 4, 3), BBox(3, 2, 4, 4)]
        mask = rasterize_detections(DetectionSet.from_boxes(boxes), 0, 10, 10)
        assert mask.count() == 12 + 16 - 4
        np.testing.assert_array_equal(mask.bits, brute_force_mask(boxes, 10, 10))

    def test_random_boxes_match_brute_force(self):
        """Test random fractional and out-of-bounds boxes against per-pixel membership."""
        rng = np.random.default_rng(5)
        for _ in range(20):
            boxes = [
                BBox(
                    float(rng.uniform(-4, 14)),
                    float(rng.uniform(-4, 10)),
                    float(rng.uniform(0.3, 6)),
                    float(rng.uniform(0.3, 6)),
                )
                for _ in range(int(rng.integers(1, 5)))
            ]
            mask = rasterize_detections(DetectionSet.from_boxes(boxes), 0, 12, 9)
            np.testing.assert_array_equal(mask.bits, brute_force_mask(boxes, 12, 9))

    def test_fully_outside_ignored(self):
        """Test a box outside the frame sets nothing."""
        dets = DetectionSet.from_boxes([BBox(20, 20, 3, 3)])
        assert rasterize_detections(dets, 0, 8, 8).count() == 0


class TestWarpBBox:
    """Test warp_bbox."""

    def test_translation(self):
        """Test a translated box keeps size and metadata."""
        H = Homography(np.array([[1.0, 0.0, 5.0], [0.0, 1.0, -2.0], [0.0, 0.0, 1.0]]))
        box = BBox(1, 3, 4, 2, Category.VEHICLE, 0.7, 4)
        warped = warp_bbox(box, H)
        assert (warped.x, warped.y, warped.w, warped.h) == pytest.approx((6.0, 1.0, 4.0, 2.0))
        assert warped.category == Category.VEHICLE
        assert (warped.confidence, warped.frame_index) == (0.7, 4)

    def test_rotation_hull(self):
        """Test a 90 degree rotation swaps width and height."""
        H = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
        warped = warp_bbox(BBox(0, 0, 4, 2), H)
        assert warped.w == pytest.approx(2.0)
        assert warped.h == pytest.approx(4.0)
        assert (warped.x, warped.y) == pytest.approx((-1.0, 0.0))

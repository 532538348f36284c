"""
Tests for detection matching and metrics.
"""

import logging

import numpy as np
import pytest
from pydantic import ValidationError
from rich.console import Console

from skyfuse.core import BBox, Category, DetectionSet
from skyfuse.evaluation import (
    InconsistentCounts,
    MatchConfig,
    MatchCriterion,
    evaluate,
    f_measure,
    match_detections,
    match_frame,
    method_ladder_table,
    metrics,
    qualifies,
)

# (precision, recall, published F-measure) of the four detector variants
PUBLISHED_ROWS = [
    (26.91, 72.56, 39.26),
    (9.37, 83.15, 16.85),
    (53.09, 71.53, 60.94),
    (69.70, 70.53, 70.12),
]


def exhaustive_matches(gt, dt, cfg):
    """Largest number of one-to-one qualifying pairs, by trying every assignment."""

    def best(gi, used):
        if gi == len(gt):
            return 0
        result = best(gi + 1, used)
        for di in range(len(dt)):
            if di not in used and qualifies(gt[gi], dt[di], cfg)[0]:
                result = max(result, 1 + best(gi + 1, used | {di}))
        return result

    return best(0, frozenset())


def random_boxes(rng, n, frame_index=0, category=Category.GROUND_TRUTH):
    return [
        BBox(
            float(rng.uniform(0, 30)),
            float(rng.uniform(0, 30)),
            float(rng.uniform(4, 10)),
            float(rng.uniform(4, 10)),
            category,
            1.0,
            frame_index,
        )
        for _ in range(n)
    ]


class TestMetrics:
    """Test metrics and f_measure."""

    @pytest.mark.parametrize("precision,recall,published", PUBLISHED_ROWS)
    def test_published_f_measures(self, precision, recall, published):
        """Test each published F-measure follows from its precision and recall."""
        assert f_measure(precision, recall) == pytest.approx(published, abs=0.01)

    def test_perfect(self):
        """Test tp = gt = dt gives 100 everywhere."""
        assert metrics(10, 10, 10) == (100.0, 100.0, 100.0)

    def test_no_detections(self):
        """Test zero detections give zero precision and F."""
        assert metrics(0, 5, 0) == (0.0, 0.0, 0.0)

    def test_inconsistent(self):
        """Test tp above either count is rejected."""
        with pytest.raises(InconsistentCounts):
            metrics(4, 3, 10)
        with pytest.raises(InconsistentCounts):
            metrics(4, 10, 3)

    def test_harmonic_bounds_and_symmetry(self):
        """Test F lies between P and R and is symmetric in them."""
        rng = np.random.default_rng(0)
        for p, r in rng.uniform(0.1, 100, (50, 2)):
            f = f_measure(p, r)
            assert min(p, r) - 1e-9 <= f <= max(p, r) + 1e-9
            assert f == pytest.approx(f_measure(r, p))

    def test_unmatched_detection_lowers_precision_only(self):
        """Test an extra unmatched detection lowers P and keeps R."""
        before = metrics(6, 10, 8)
        after = metrics(6, 10, 9)
        assert after[0] < before[0]
        assert after[1] == before[1]


class TestMatching:
    """Test match_detections."""

    def test_identical_sets(self):
        """Test identical boxes all match."""
        rng = np.random.default_rng(1)
        boxes = [b for i in range(3) for b in random_boxes(rng, 4, frame_index=i)]
        gt = DetectionSet.from_boxes(boxes)
        dt = DetectionSet.from_boxes(b.with_category(Category.MOVING_VEHICLE) for b in boxes)
        assert match_detections(gt, dt, MatchConfig()).tp == len(boxes)

    def test_disjoint(self):
        """Test far-apart boxes never match."""
        gt = DetectionSet.from_boxes([BBox(0, 0, 5, 5)])
        dt = DetectionSet.from_boxes([BBox(50, 50, 5, 5)])
        assert match_detections(gt, dt, MatchConfig()).tp == 0

    def test_frames_kept_apart(self):
        """Test boxes on different frames never match."""
        gt = DetectionSet.from_boxes([BBox(0, 0, 5, 5, frame_index=0)])
        dt = DetectionSet.from_boxes([BBox(0, 0, 5, 5, frame_index=1)])
        assert match_detections(gt, dt, MatchConfig()).tp == 0

    def test_iou_threshold(self):
        """Test IoU just below and above the threshold."""
        gt = [BBox(0, 0, 10, 10)]
        half = [BBox(5, 0, 10, 10)]  # IoU 1/3
        assert match_frame(gt, half, MatchConfig(iou_threshold=0.3))[0] == 1
        assert match_frame(gt, half, MatchConfig(iou_threshold=0.5))[0] == 0

    def test_centroid_criterion(self):
        """Test a loose detection matches by centroid but not by IoU."""
        gt = [BBox(0, 0, 4, 4)]
        loose = [BBox(-8, -8, 20, 20)]
        assert match_frame(gt, loose, MatchConfig())[0] == 0
        cfg = MatchConfig(criterion=MatchCriterion.CENTROID_IN_BOX)
        assert match_frame(gt, loose, cfg)[0] == 1

    def test_one_to_one(self):
        """Test two detections on one GT count once."""
        gt = [BBox(0, 0, 10, 10)]
        dt = [BBox(0, 0, 10, 10), BBox(1, 0, 10, 10)]
        assert match_frame(gt, dt, MatchConfig())[0] == 1
        assert match_frame(gt, dt, MatchConfig(one_to_one=False))[0] == 1

    def test_greedy_prefers_highest_iou(self):
        """Test the best-overlapping detection takes the GT box."""
        gt = [BBox(0, 0, 10, 10)]
        dt = [BBox(3, 0, 10, 10), BBox(1, 0, 10, 10)]
        _, accepted = match_frame(gt, dt, MatchConfig())
        assert [di for _, _, di in accepted] == [1]

    def test_optimal_beats_greedy(self):
        """Test a chain where greedy takes the wrong pair and assignment takes both."""
        gt = [BBox(0, 0, 10, 10), BBox(6, 0, 10, 10)]
        dt = [BBox(3, 0, 10, 10), BBox(-3, 0, 10, 10)]
        greedy = match_frame(gt, dt, MatchConfig(iou_threshold=0.3))[0]
        optimal = match_frame(gt, dt, MatchConfig(iou_threshold=0.3, optimal=True))[0]
        assert optimal == exhaustive_matches(gt, dt, MatchConfig(iou_threshold=0.3)) == 2
        assert greedy <= optimal

    def test_against_exhaustive_assignment(self, caplog):
        """Test random 5 GT / 7 DT frames against every possible assignment."""
        rng = np.random.default_rng(7)
        cfg = MatchConfig(iou_threshold=0.2)
        optimal_cfg = MatchConfig(iou_threshold=0.2, optimal=True)
        agreed = 0
        with caplog.at_level(logging.DEBUG, logger="skyfuse.evaluation"):
            for _ in range(40):
                gt = random_boxes(rng, 5)
                dt = random_boxes(rng, 7, category=Category.MOVING_VEHICLE)
                oracle = exhaustive_matches(gt, dt, cfg)
                greedy = match_frame(gt, dt, cfg)[0]
                assert match_frame(gt, dt, optimal_cfg)[0] == oracle
                assert greedy <= oracle
                agreed += greedy == oracle
        assert agreed > 0
        disagreements = [r for r in caplog.records if "were possible" in r.getMessage()]
        assert len(disagreements) == 40 - agreed

    def test_optimal_requires_one_to_one(self):
        """Test optimal assignment without one-to-one is rejected."""
        with pytest.raises(ValidationError):
            MatchConfig(one_to_one=False, optimal=True)

    def test_parse(self):
        """Test criterion strings."""
        assert MatchConfig.parse("iou:0.5").iou_threshold == 0.5
        assert MatchConfig.parse("iou").iou_threshold == 0.3
        assert MatchConfig.parse("centroid").criterion == MatchCriterion.CENTROID_IN_BOX
        with pytest.raises(ValueError):
            MatchConfig.parse("overlap")


class TestEvaluate:
    """Test evaluate and the ladder table."""

    def test_scores(self):
        """Test two of three GT found by four detections."""
        gt = DetectionSet.from_boxes(
            [BBox(0, 0, 5, 5), BBox(20, 0, 5, 5), BBox(40, 0, 5, 5)]
        )
        dt = DetectionSet.from_boxes(
            [BBox(0, 0, 5, 5), BBox(20, 0, 5, 5), BBox(60, 0, 5, 5), BBox(80, 0, 5, 5)]
        )
        scores = evaluate(gt, dt)
        assert (scores.tp, scores.gt, scores.dt) == (2, 3, 4)
        assert scores.precision == pytest.approx(50.0)
        assert scores.recall == pytest.approx(200.0 / 3)
        assert scores.criterion == "IoU >= 0.30"

    def test_frame_restriction(self):
        """Test frames outside the evaluated range are ignored."""
        gt = DetectionSet.from_boxes([BBox(0, 0, 5, 5, frame_index=i) for i in range(4)])
        dt = DetectionSet.from_boxes([BBox(0, 0, 5, 5, frame_index=i) for i in (1, 2)])
        scores = evaluate(gt, dt, frames=[1, 2])
        assert (scores.tp, scores.gt, scores.recall) == (2, 2, 100.0)

    def test_ladder_table(self):
        """Test the table lists each method and names the criterion."""
        gt = DetectionSet.from_boxes([BBox(0, 0, 5, 5)])
        scores = evaluate(gt, gt)
        console = Console(width=120, color_system=None, record=True)
        console.print(method_ladder_table([("Flux + appearance", scores)]))
        text = console.export_text()
        assert "Flux + appearance" in text
        assert "100.00" in text
        assert "IoU >= 0.30" in text

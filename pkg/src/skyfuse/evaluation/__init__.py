"""
Detection evaluation for skyfuse.

Matches detections to ground truth frame by frame and reports precision,
recall and F-measure in percent, naming the match rule that was used.

Example:
    >>> from skyfuse.evaluation import MatchConfig, evaluate
    >>> scores = evaluate(gt, detections, MatchConfig.parse("iou:0.3"))
    >>> scores.f_measure
"""

from .models import MatchCriterion, MatchConfig, Match, MatchResult, DetectionScores
from .matching import qualifies, match_frame, match_detections
from .metrics import InconsistentCounts, f_measure, metrics, evaluate, method_ladder_table

__all__ = [
    "MatchCriterion",
    "MatchConfig",
    "Match",
    "MatchResult",
    "DetectionScores",
    "qualifies",
    "match_frame",
    "match_detections",
    "InconsistentCounts",
    "f_measure",
    "metrics",
    "evaluate",
    "method_ladder_table",
]

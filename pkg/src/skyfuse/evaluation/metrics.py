"""
Precision, recall and F-measure, plus the method-ladder table.
"""

import logging
from typing import Iterable, Optional, Sequence, Tuple

from rich.table import Table

from ..core.errors import SkyfuseError
from ..core.models import DetectionSet
from .matching import match_detections
from .models import DetectionScores, MatchConfig

logger = logging.getLogger(__name__)


class InconsistentCounts(SkyfuseError):
    """Raised when a true-positive count exceeds the GT or detection count."""

    pass


def f_measure(precision: float, recall: float) -> float:
    """
    Harmonic mean of precision and recall; 0 when both are 0.

    Example:
        >>> round(f_measure(26.91, 72.56), 2)
        39.26
    """
    if precision + recall <= 0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def metrics(tp: int, gt_count: int, dt_count: int) -> Tuple[float, float, float]:
    """
    Precision, recall and F-measure in percent.

    Args:
        tp: True positives
        gt_count: Ground-truth boxes
        dt_count: Detections

    Returns:
        (precision, recall, f_measure); precision is 0 without detections and
        recall is 0 without ground truth

    Raises:
        InconsistentCounts: If tp is negative or exceeds either count
    """
    if gt_count < 0 or dt_count < 0 or tp < 0:
        raise InconsistentCounts(
            f"Counts must be nonnegative: tp={tp}, gt={gt_count}, dt={dt_count}"
        )
    if tp > gt_count or tp > dt_count:
        raise InconsistentCounts(f"tp={tp} exceeds gt={gt_count} or dt={dt_count}")
    precision = 100.0 * tp / dt_count if dt_count else 0.0
    recall = 100.0 * tp / gt_count if gt_count else 0.0
    return precision, recall, f_measure(precision, recall)


def evaluate(
    gt: DetectionSet,
    dt: DetectionSet,
    cfg: Optional[MatchConfig] = None,
    frames: Optional[Iterable[int]] = None,
) -> DetectionScores:
    """
    Score detections against ground truth.

    Args:
        gt: Ground-truth boxes
        dt: Detections
        cfg: Match rule; defaults to greedy IoU >= 0.3
        frames: Restrict both sets to these frames

    Returns:
        DetectionScores naming the match rule
    """
    cfg = cfg or MatchConfig()
    if frames is not None:
        wanted = list(frames)
        gt, dt = gt.restrict(wanted), dt.restrict(wanted)
    result = match_detections(gt, dt, cfg)
    precision, recall, f = metrics(result.tp, len(gt), len(dt))
    logger.info(
        f"{result.tp} of {len(gt)} GT matched by {len(dt)} detections ({cfg.name}): "
        f"P {precision:.2f} R {recall:.2f} F {f:.2f}"
    )
    return DetectionScores(
        tp=result.tp,
        gt=len(gt),
        dt=len(dt),
        precision=precision,
        recall=recall,
        f_measure=f,
        criterion=cfg.name,
    )


def method_ladder_table(
    rows: Sequence[Tuple[str, DetectionScores]], title: str = "Moving vehicle detection"
) -> Table:
    """A precision / recall / F-measure table, one row per method, criterion in the caption."""
    criteria = sorted({scores.criterion for _, scores in rows})
    table = Table(title=title, caption=f"Match criterion: {', '.join(criteria) or '-'}")
    table.add_column("Method", style="cyan")
    table.add_column("Precision", justify="right")
    table.add_column("Recall", justify="right")
    table.add_column("F-measure", justify="right", style="green")
    table.add_column("TP / GT / DT", justify="right")
    for label, scores in rows:
        table.add_row(label, *scores.as_row(), f"{scores.tp} / {scores.gt} / {scores.dt}")
    return table

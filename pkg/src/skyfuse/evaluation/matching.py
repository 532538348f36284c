"""
Ground-truth to detection matching.
"""

import logging
from typing import List, Sequence, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment

from ..core.models import BBox, DetectionSet
from .models import Match, MatchConfig, MatchCriterion, MatchResult

logger = logging.getLogger(__name__)

# (iou, gt index, dt index)
Candidate = Tuple[float, int, int]


def qualifies(gt: BBox, dt: BBox, cfg: MatchConfig) -> Tuple[bool, float]:
    """Whether ``dt`` may match ``gt`` under ``cfg``, and their IoU."""
    iou = gt.iou(dt)
    if cfg.criterion == MatchCriterion.CENTROID_IN_BOX:
        return gt.contains_point(*dt.center), iou
    return iou >= cfg.iou_threshold, iou


def _candidates(gt: Sequence[BBox], dt: Sequence[BBox], cfg: MatchConfig) -> List[Candidate]:
    pairs = []
    for gi, g in enumerate(gt):
        for di, d in enumerate(dt):
            ok, iou = qualifies(g, d, cfg)
            if ok:
                pairs.append((iou, gi, di))
    return pairs


def _greedy(candidates: List[Candidate]) -> List[Candidate]:
    """Accept pairs by descending IoU while both boxes are free."""
    used_gt, used_dt, accepted = set(), set(), []
    for iou, gi, di in sorted(candidates, key=lambda c: (-c[0], c[1], c[2])):
        if gi in used_gt or di in used_dt:
            continue
        used_gt.add(gi)
        used_dt.add(di)
        accepted.append((iou, gi, di))
    return accepted


def _optimal(candidates: List[Candidate], n_gt: int, n_dt: int) -> List[Candidate]:
    """Maximum number of pairs, ties broken by total IoU."""
    if not candidates:
        return []
    weights = np.zeros((n_gt, n_dt))
    # the IoU bonus of a whole assignment stays below one extra pair
    bonus = 1.0 / (min(n_gt, n_dt) + 1)
    for iou, gi, di in candidates:
        weights[gi, di] = 1.0 + bonus * iou
    rows, cols = linear_sum_assignment(weights, maximize=True)
    lookup = {(gi, di): iou for iou, gi, di in candidates}
    pairs = [(int(r), int(c)) for r, c in zip(rows, cols) if weights[r, c] > 0]
    return [(lookup[p], p[0], p[1]) for p in pairs]


def _many_to_one(candidates: List[Candidate]) -> List[Candidate]:
    """Each detection keeps its best ground truth; a ground truth may be hit repeatedly."""
    best = {}
    for iou, gi, di in candidates:
        if di not in best or iou > best[di][0]:
            best[di] = (iou, gi, di)
    return list(best.values())


def match_frame(
    gt: Sequence[BBox], dt: Sequence[BBox], cfg: MatchConfig
) -> Tuple[int, List[Candidate]]:
    """
    Match one frame's boxes.

    Returns:
        (true positives, accepted (iou, gt index, dt index) pairs)
    """
    candidates = _candidates(gt, dt, cfg)
    if not cfg.one_to_one:
        accepted = _many_to_one(candidates)
        return len({gi for _, gi, _ in accepted}), accepted
    if cfg.optimal:
        accepted = _optimal(candidates, len(gt), len(dt))
    else:
        accepted = _greedy(candidates)
        if logger.isEnabledFor(logging.DEBUG) and candidates:
            best = len(_optimal(candidates, len(gt), len(dt)))
            if best != len(accepted):
                logger.debug(f"Greedy matched {len(accepted)} pairs where {best} were possible")
    return len(accepted), accepted


def match_detections(gt: DetectionSet, dt: DetectionSet, cfg: MatchConfig) -> MatchResult:
    """
    Match ground truth and detections frame by frame.

    Args:
        gt: Ground-truth boxes
        dt: Detections
        cfg: Match rule

    Returns:
        MatchResult with the TP count and the accepted pairs per frame

    Example:
        >>> result = match_detections(gt, dt, MatchConfig())
        >>> result.tp
        12
    """
    result = MatchResult()
    for frame_index in sorted(set(gt.frame_indices) | set(dt.frame_indices)):
        g, d = gt.for_frame(frame_index), dt.for_frame(frame_index)
        tp, accepted = match_frame(g, d, cfg)
        result.tp += tp
        result.matches[frame_index] = [
            Match(frame_index, g[gi], d[di], iou) for iou, gi, di in accepted
        ]
    return result

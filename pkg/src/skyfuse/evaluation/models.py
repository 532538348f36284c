"""
Data models for detection evaluation.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..core.models import BBox


class MatchCriterion(str, Enum):
    """When a detection counts as finding a ground-truth box."""

    IOU = "iou"
    CENTROID_IN_BOX = "centroid"


class MatchConfig(BaseModel):
    """Ground-truth to detection matching rule.

    Example:
        >>> MatchConfig.parse("iou:0.5").name
        'IoU >= 0.50'
    """

    model_config = ConfigDict(frozen=True)

    criterion: MatchCriterion = Field(
        default=MatchCriterion.IOU, description="IoU threshold or centroid-in-GT-box"
    )
    iou_threshold: float = Field(
        default=0.3, gt=0.0, le=1.0, description="Smallest IoU of a match (IoU criterion)"
    )
    one_to_one: bool = Field(default=True, description="Each box takes part in one match at most")
    optimal: bool = Field(
        default=False, description="Maximum-cardinality assignment instead of greedy"
    )

    @model_validator(mode="after")
    def validate_optimal(self) -> "MatchConfig":
        if self.optimal and not self.one_to_one:
            raise ValueError("optimal assignment requires one_to_one matching")
        return self

    @classmethod
    def parse(cls, text: str) -> "MatchConfig":
        """Parse ``iou[:threshold]`` or ``centroid``."""
        kind, _, value = text.strip().lower().partition(":")
        if kind == MatchCriterion.CENTROID_IN_BOX.value:
            return cls(criterion=MatchCriterion.CENTROID_IN_BOX)
        if kind == MatchCriterion.IOU.value:
            return cls(criterion=MatchCriterion.IOU, iou_threshold=float(value or 0.3))
        raise ValueError(f"Unknown match criterion '{text}'")

    @property
    def name(self) -> str:
        if self.criterion == MatchCriterion.CENTROID_IN_BOX:
            return "centroid in GT box"
        return f"IoU >= {self.iou_threshold:.2f}"


@dataclass(frozen=True)
class Match:
    """One accepted ground-truth / detection pair."""

    frame_index: int
    gt: BBox
    dt: BBox
    iou: float


@dataclass
class MatchResult:
    """True-positive count plus the accepted pairs of every frame."""

    tp: int = 0
    matches: Dict[int, List[Match]] = field(default_factory=dict)


@dataclass(frozen=True)
class DetectionScores:
    """Counts and percentages of one evaluation.

    Attributes:
        tp: Matched pairs
        gt: Ground-truth boxes
        dt: Detections
        precision: 100 * tp / dt
        recall: 100 * tp / gt
        f_measure: Harmonic mean of precision and recall
        criterion: Name of the match rule used
    """

    tp: int
    gt: int
    dt: int
    precision: float
    recall: float
    f_measure: float
    criterion: str

    def as_row(self) -> List[str]:
        return [f"{self.precision:.2f}", f"{self.recall:.2f}", f"{self.f_measure:.2f}"]

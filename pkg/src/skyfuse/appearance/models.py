"""
Pydantic model for one row of a detection file.
"""

from pydantic import BaseModel, ConfigDict, Field, field_validator

from ..core.models import BBox, Category


class DetectionRecord(BaseModel):
    """A single externally produced detection, in stabilized-plane pixels."""

    model_config = ConfigDict(frozen=True)

    frame_index: int = Field(..., ge=0, description="Frame the box belongs to")
    class_label: str = Field(..., min_length=1, description="Detector class name")
    confidence: float = Field(..., ge=0.0, le=1.0, description="Detector score")
    x: float = Field(..., description="Left edge (px)")
    y: float = Field(..., description="Top edge (px)")
    w: float = Field(..., gt=0, description="Width (px)")
    h: float = Field(..., gt=0, description="Height (px)")

    @field_validator("class_label")
    @classmethod
    def normalize_label(cls, v: str) -> str:
        """Class names compare case-insensitively."""
        label = v.strip().lower()
        if not label:
            raise ValueError("class label is empty")
        return label

    def to_bbox(self, category: Category) -> BBox:
        return BBox(
            x=self.x,
            y=self.y,
            w=self.w,
            h=self.h,
            category=category,
            confidence=self.confidence,
            frame_index=self.frame_index,
        )

"""
Detection file reading and writing.

A detection file is comma-separated with one header line::

    frame_index,class,confidence,x,y,w,h

Coordinates are stabilized-plane pixels, (x, y) being the top-left corner.
The same format carries raw detector output, ground truth (class ``GT``)
and categorized fusion output (class = category name).
"""

import csv
import logging
from collections import Counter
from pathlib import Path
from typing import FrozenSet, Iterable, Iterator, List, Optional, Tuple, Union

from pydantic import ValidationError

from ..core.errors import SkyfuseError
from ..core.models import BBox, Category, DetectionSet
from .models import DetectionRecord

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

DETECTION_HEADER = ["frame_index", "class", "confidence", "x", "y", "w", "h"]

# car, pick-up and van merge into one vehicle class
DEFAULT_VEHICLE_CLASSES: FrozenSet[str] = frozenset({"car", "pick-up", "van"})
DEFAULT_MIN_CONFIDENCE = 0.25
GROUND_TRUTH_LABEL = "gt"


class DetectionParseError(SkyfuseError):
    """Raised when a detection file line cannot be parsed."""

    def __init__(self, message: str, line: int = 0):
        self.line = line
        prefix = f"line {line}: " if line else ""
        super().__init__(f"{prefix}{message}")


def iter_detection_records(path: PathLike) -> Iterator[Tuple[int, DetectionRecord]]:
    """
    Yield (1-based line number, record) for every data line of a detection file.

    An empty file (no header either) holds no records.

    Raises:
        DetectionParseError: With the 1-based line number of the first bad line
    """
    path = Path(path)
    if not path.is_file():
        raise DetectionParseError(f"Detection file not found: {path}")

    with path.open(newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None:
            return
        if [h.strip().lower() for h in header] != DETECTION_HEADER:
            raise DetectionParseError(
                f"expected header '{','.join(DETECTION_HEADER)}'", line=1
            )
        for line_number, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(DETECTION_HEADER):
                raise DetectionParseError(
                    f"expected {len(DETECTION_HEADER)} fields, got {len(row)}", line=line_number
                )
            fields = dict(zip(DETECTION_HEADER, (cell.strip() for cell in row)))
            try:
                record = DetectionRecord(
                    frame_index=fields["frame_index"],
                    class_label=fields["class"],
                    confidence=fields["confidence"],
                    x=fields["x"],
                    y=fields["y"],
                    w=fields["w"],
                    h=fields["h"],
                )
            except ValidationError as exc:
                problems = "; ".join(
                    f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in exc.errors()
                )
                raise DetectionParseError(problems, line=line_number) from exc
            yield line_number, record


def read_detection_records(path: PathLike) -> List[DetectionRecord]:
    """Every record of a detection file, in file order."""
    return [record for _, record in iter_detection_records(path)]


def load_detections(
    path: PathLike,
    class_filter: Optional[Iterable[str]] = DEFAULT_VEHICLE_CLASSES,
    min_confidence: float = DEFAULT_MIN_CONFIDENCE,
    category: Category = Category.VEHICLE,
) -> DetectionSet:
    """
    Load detections, keep accepted classes above a confidence and merge them.

    Args:
        path: Detection file
        class_filter: Accepted class names (case-insensitive); None accepts all
        min_confidence: Records below this score are dropped
        category: The single category accepted records are merged into

    Returns:
        DetectionSet grouped by frame, deduplicated. Labels outside
        ``class_filter`` are counted in ``unknown_labels``.

    Raises:
        DetectionParseError: On a malformed line

    Example:
        >>> dets = load_detections("yolo.csv", {"car", "pick-up", "van"}, 0.5)
        >>> dets.unknown_labels
        {'boat': 1}
    """
    accepted = None if class_filter is None else {c.strip().lower() for c in class_filter}
    unknown: Counter = Counter()
    boxes: List[BBox] = []
    for record in read_detection_records(path):
        if accepted is not None and record.class_label not in accepted:
            unknown[record.class_label] += 1
            continue
        if record.confidence < min_confidence:
            continue
        boxes.append(record.to_bbox(category))

    if unknown:
        summary = ", ".join(f"{label} x{n}" for label, n in sorted(unknown.items()))
        logger.warning(f"{path}: ignored detections with unknown classes ({summary})")
    detections = DetectionSet.from_boxes(boxes, dict(unknown))
    logger.info(
        f"Loaded {len(detections)} {category.value} detections over "
        f"{len(detections.frame_indices)} frames from {path}"
    )
    return detections


def load_ground_truth(path: PathLike) -> DetectionSet:
    """Load a ground-truth file (class ``GT``) at any confidence."""
    return load_detections(
        path, {GROUND_TRUTH_LABEL}, min_confidence=0.0, category=Category.GROUND_TRUTH
    )


def load_categorized(path: PathLike) -> DetectionSet:
    """
    Load fusion output whose class column holds category names.

    Raises:
        DetectionParseError: If a class is not a category name
    """
    by_name = {c.value.lower(): c for c in Category}
    boxes = []
    for line_number, record in iter_detection_records(path):
        if record.class_label not in by_name:
            raise DetectionParseError(
                f"'{record.class_label}' is not a detection category", line=line_number
            )
        boxes.append(record.to_bbox(by_name[record.class_label]))
    return DetectionSet.from_boxes(boxes)


def _fmt(value: float) -> str:
    value = float(value)
    return str(int(value)) if value.is_integer() else repr(value)


def write_detections(
    detections: Union[DetectionSet, Iterable[BBox]],
    path: PathLike,
    label: Optional[str] = None,
) -> Path:
    """
    Write boxes in the detection file format, in canonical order.

    Args:
        detections: Boxes to write
        path: Output file
        label: Class column for every row; defaults to each box's category
    """
    if not isinstance(detections, DetectionSet):
        detections = DetectionSet.from_boxes(detections)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(DETECTION_HEADER)
        for box in detections:
            writer.writerow(
                [
                    box.frame_index,
                    label if label is not None else box.category.value,
                    _fmt(box.confidence),
                    _fmt(box.x),
                    _fmt(box.y),
                    _fmt(box.w),
                    _fmt(box.h),
                ]
            )
    return path

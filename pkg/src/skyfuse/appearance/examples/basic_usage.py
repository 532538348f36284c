"""
Basic usage examples for detection ingest.

Run with: python -m skyfuse.appearance.examples.basic_usage
"""

import tempfile
from pathlib import Path

import numpy as np

from skyfuse.appearance import (
    DETECTION_HEADER,
    DetectionParseError,
    iter_detection_records,
    load_categorized,
    load_detections,
    rasterize_detections,
    warp_bbox,
)
from skyfuse.core import BBox, Homography

ROWS = [
    "0,car,0.91,10,10,6,3",
    "0,boat,0.80,30,30,8,4",
    "0,van,0.42,20,5,5,3",
    "1,Pick-Up,0.77,12,10,6,3",
]


def write_rows(directory: Path, name: str, rows) -> Path:
    path = directory / name
    path.write_text("\n".join([",".join(DETECTION_HEADER), *rows]) + "\n")
    return path


def example_loading(directory: Path) -> None:
    """Example 1: Class merging and the confidence filter."""
    print("\n" + "=" * 70)
    print("Example 1: Loading Detections")
    print("=" * 70)

    path = write_rows(directory, "detections.csv", ROWS)
    for line, record in iter_detection_records(path):
        print(f"  line {line}: {record.class_label} {record.confidence:.2f}")

    dets = load_detections(path, {"car", "pick-up", "van"}, min_confidence=0.5)
    print(f"\nKept {len(dets)} boxes over frames {dets.frame_indices}")
    print(f"Unknown classes: {dets.unknown_labels}")
    print(f"Categories: {sorted({b.category.value for b in dets})}")


def example_rasterize(directory: Path) -> None:
    """Example 2: Appearance mask of one frame."""
    print("\n" + "=" * 70)
    print("Example 2: Rasterization")
    print("=" * 70)

    dets = load_detections(directory / "detections.csv", min_confidence=0.0)
    mask = rasterize_detections(dets, frame_index=0, width=40, height=24)
    print(f"\nFrame 0 mask: {mask.count()} of {mask.width * mask.height} px set")
    print(mask.bits[8:15, 8:18].astype(np.uint8))


def example_warp() -> None:
    """Example 3: A raw-frame box mapped onto the plane."""
    print("\n" + "=" * 70)
    print("Example 3: Warping Boxes")
    print("=" * 70)

    to_plane = Homography(np.array([[0.5, 0.0, 10.0], [0.0, 0.5, 4.0], [0.0, 0.0, 1.0]]))
    box = BBox(40, 20, 12, 6, frame_index=3)
    print(f"\nRaw box: {box.x}, {box.y}, {box.w} x {box.h}")
    warped = warp_bbox(box, to_plane)
    print(f"Plane box: {warped.x}, {warped.y}, {warped.w} x {warped.h}")


def example_errors(directory: Path) -> None:
    """Example 4: Parse errors carry the line number."""
    print("\n" + "=" * 70)
    print("Example 4: Parse Errors")
    print("=" * 70)

    rows = ["0,MovingVehicle,1,1,1,2,2", "0,truck,1,1,1,2,2"]
    path = write_rows(directory, "categorized.csv", rows)
    try:
        load_categorized(path)
    except DetectionParseError as e:
        print(f"\n{e}")
        print(f"Line attribute: {e.line}")


if __name__ == "__main__":
    print("\n" + "=" * 70)
    print("skyfuse appearance - Usage Examples")
    print("=" * 70)

    with tempfile.TemporaryDirectory() as tmp:
        example_loading(Path(tmp))
        example_rasterize(Path(tmp))
        example_warp()
        example_errors(Path(tmp))

    print("\n" + "=" * 70)
    print("Examples complete!")
    print("=" * 70 + "\n")

"""
Basic usage examples for the core types.

Run with: python -m skyfuse.core.examples.basic_usage
"""

import tempfile
from pathlib import Path

import numpy as np

from skyfuse.core import (
    BBox,
    CameraPose,
    Category,
    DetectionSet,
    Frame,
    SequenceConfig,
    ThresholdMode,
    apply_homography,
    frame_filename,
    list_sequence,
    load_frame,
    luminance,
    normalize_homography,
    save_frame,
)


def example_frames() -> None:
    """Example 1: Build, save and reload frames."""
    print("\n" + "=" * 70)
    print("Example 1: Frames")
    print("=" * 70)

    rng = np.random.default_rng(0)
    frame = Frame(rng.random((32, 48, 3)), index=7)
    print(f"\nFrame {frame.index}: {frame.width}x{frame.height}, {frame.channels} channels")
    print(f"Luminance channels: {luminance(frame).channels}")

    with tempfile.TemporaryDirectory() as tmp:
        path = save_frame(frame, Path(tmp) / frame_filename(frame.index))
        print(f"Saved as {path.name}")
        print(f"Sequence listing: {sorted(list_sequence(tmp))}")
        reloaded = load_frame(path, index=frame.index)
        error = np.abs(reloaded.data - frame.data).max()
        print(f"Largest 8-bit quantization error: {error:.4f}")


def example_homographies() -> None:
    """Example 2: Canonical scale and point mapping."""
    print("\n" + "=" * 70)
    print("Example 2: Homographies")
    print("=" * 70)

    matrix = np.array([[2.0, 0.0, 4.0], [0.0, 2.0, -2.0], [0.0, 0.0, 2.0]])
    H = normalize_homography(matrix)
    print(f"\nNormalized:\n{H.matrix}")
    print(f"Same after scaling by -3: {normalize_homography(-3 * matrix).max_abs_difference(H)}")
    print(f"(0, 0) maps to {apply_homography(H, [[0.0, 0.0]])[0]}")


def example_camera_pose() -> None:
    """Example 3: A nadir camera 500 m above the plane."""
    print("\n" + "=" * 70)
    print("Example 3: Camera Pose")
    print("=" * 70)

    pose = CameraPose.from_intrinsics(1000.0, 320.0, 240.0, np.eye(3), [0.0, 0.0, 500.0])
    print(f"\nCenter: {pose.center}")
    print(f"World origin projects to {pose.project(np.zeros((1, 3)))[0]}")


def example_detection_sets() -> None:
    """Example 4: Boxes grouped by frame."""
    print("\n" + "=" * 70)
    print("Example 4: Detection Sets")
    print("=" * 70)

    boxes = [
        BBox(10, 10, 4, 2, Category.VEHICLE, 0.9, 0),
        BBox(10, 10, 4, 2, Category.VEHICLE, 0.9, 0),
        BBox(12, 10, 4, 2, Category.VEHICLE, 0.8, 1),
        BBox(40, 40, 20, 20, Category.BUILDING, 1.0, 1),
    ]
    dets = DetectionSet.from_boxes(boxes)
    print(f"\n{len(boxes)} boxes, {len(dets)} after deduplication")
    print(f"Frames: {dets.frame_indices}")
    print(f"Buildings: {len(dets.filter(Category.BUILDING))}")
    a, b = dets.for_frame(0)[0], dets.for_frame(1)[0]
    print(f"IoU between frames 0 and 1: {a.iou(b):.2f}")


def example_sequence_config() -> None:
    """Example 5: Sequence configuration."""
    print("\n" + "=" * 70)
    print("Example 5: Sequence Configuration")
    print("=" * 70)

    config = SequenceConfig(temporal_window=7, trace_threshold_mode=ThresholdMode.parse("otsu"))
    print(f"\nWindow {config.temporal_window}, half window {config.half_window}")
    print(f"Spatial filter support: {config.spatial_support()} px")
    print(f"Threshold: {config.trace_threshold_mode.kind.value}")


if __name__ == "__main__":
    print("\n" + "=" * 70)
    print("skyfuse core - Usage Examples")
    print("=" * 70)

    example_frames()
    example_homographies()
    example_camera_pose()
    example_detection_sets()
    example_sequence_config()

    print("\n" + "=" * 70)
    print("Examples complete!")
    print("=" * 70 + "\n")

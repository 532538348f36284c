"""
Basic usage examples for motion/appearance fusion.

Run with: python -m skyfuse.fusion.examples.basic_usage
"""

import numpy as np

from skyfuse.core import BBox, BinaryMask, Category, SequenceConfig
from skyfuse.fusion import (
    BuildingAggregator,
    FusionMethod,
    connected_components,
    detect,
    fuse,
    fuse_sequence,
)

SIZE = 96


def mask(*rects) -> BinaryMask:
    """Union of (top, left, height, width) rectangles."""
    bits = np.zeros((SIZE, SIZE), dtype=bool)
    for top, left, height, width in rects:
        bits[top : top + height, left : left + width] = True
    return BinaryMask(bits)


def example_decision_table() -> None:
    """Example 1: One blob of every category."""
    print("\n" + "=" * 70)
    print("Example 1: Fusion Table")
    print("=" * 70)

    motion = mask((10, 10, 6, 8), (40, 40, 30, 30), (80, 10, 5, 5))
    appearance = mask((9, 9, 8, 10), (80, 70, 6, 9))
    output = fuse(motion, appearance, SequenceConfig())

    print()
    for label in output.blob_labels:
        print(
            f"  blob at ({label.bbox.x:.0f}, {label.bbox.y:.0f}) area {label.area:4d} "
            f"overlap {label.overlap:.2f} -> {label.category.value}"
        )
    stationary = output.boxes(Category.STATIONARY_VEHICLE_OR_FALSE)
    print(f"Stationary vehicles: {len(stationary)}")
    print(f"Moving-vehicle mask: {output.moving_vehicle_mask.count()} px")
    print(f"Building mask: {output.building_mask.count()} px")


def example_components() -> None:
    """Example 2: Connected components with a minimum area."""
    print("\n" + "=" * 70)
    print("Example 2: Connected Components")
    print("=" * 70)

    blobs = connected_components(mask((0, 0, 3, 3), (3, 3, 3, 3), (50, 50, 2, 2)), min_area=5)
    for blob in blobs:
        print(f"  area {blob.area}, box {blob.bbox.w:.0f} x {blob.bbox.h:.0f}")


def example_roof_top_filter() -> None:
    """Example 3: A car on a drifting roof is not a moving vehicle."""
    print("\n" + "=" * 70)
    print("Example 3: Roof-Top Filter")
    print("=" * 70)

    motion, appearance = {}, {}
    for i in range(4):
        shift = 2 * i
        motion[i] = mask((30, 20 + shift, 30, 30), (38, 28 + shift, 6, 8), (80, 5 + 3 * i, 5, 8))
        appearance[i] = mask((37, 27 + shift, 8, 10), (79, 4 + 3 * i, 7, 10))

    config = SequenceConfig()
    result = fuse_sequence(motion, appearance, config)
    for output in result.outputs:
        moving = output.boxes(Category.MOVING_VEHICLE)
        print(
            f"  Frame {output.frame_index}: {len(moving)} moving, "
            f"{len(output.building_boxes)} roof boxes"
        )
    print(f"Building tracks: {len(result.tracks)}")

    for method in FusionMethod:
        found = detect(method, motion, appearance, config)
        print(f"  {method.label:<30} {len(found)} detections")


def example_aggregator() -> None:
    """Example 4: Linking roof boxes across frames."""
    print("\n" + "=" * 70)
    print("Example 4: Building Aggregation")
    print("=" * 70)

    aggregator = BuildingAggregator(iou_link=0.1)
    for i in range(5):
        aggregator.add_frame(i, [BBox(20 + 2 * i, 30, 25, 25, Category.BUILDING, frame_index=i)])
    (track,) = aggregator.tracks
    print(f"\nTrack {track.track_id}: frames {track.first_frame}..{track.last_frame}")
    print(f"Spread (height proxy): {track.spread():.1f} px")
    hull = track.hull()
    print(f"Hull: {hull.x:.0f}, {hull.y:.0f}, {hull.w:.0f} x {hull.h:.0f}")


if __name__ == "__main__":
    print("\n" + "=" * 70)
    print("skyfuse fusion - Usage Examples")
    print("=" * 70)

    example_decision_table()
    example_components()
    example_roof_top_filter()
    example_aggregator()

    print("\n" + "=" * 70)
    print("Examples complete!")
    print("=" * 70 + "\n")

"""
Basic usage examples for synthetic scenes.

Run with: python -m skyfuse.synth.examples.basic_usage
"""

import tempfile
from pathlib import Path

from skyfuse.synth import (
    InvalidSpec,
    SceneSpec,
    oracle_appearance,
    orbit_poses,
    render_sequence,
    write_scene,
)


def example_render() -> None:
    """Example 1: Render the demo scene."""
    print("\n" + "=" * 70)
    print("Example 1: Rendering")
    print("=" * 70)

    spec = SceneSpec.demo(frame_count=8)
    scene = render_sequence(spec, jobs=4)
    first = scene.frames[0]
    print(f"\n{len(scene.frames)} frames of {first.width} x {first.height}")
    print(f"Moving boxes: {len(scene.ground_truth)}, parked: {len(scene.parked_truth)}")
    print(f"Roof boxes: {len(scene.building_truth)}")

    plane = spec.plane_config()
    print(f"Plane raster {plane.output_width} x {plane.output_height} at {plane.plane_scale} m/px")


def example_orbit() -> None:
    """Example 2: Camera poses along the orbit."""
    print("\n" + "=" * 70)
    print("Example 2: Orbit Poses")
    print("=" * 70)

    poses = orbit_poses(SceneSpec.demo(frame_count=4))
    print()
    for index, pose in poses.items():
        x, y, z = pose.center
        print(f"  Frame {index}: camera at ({x:7.1f}, {y:7.1f}, {z:7.1f})")


def example_oracle() -> None:
    """Example 3: Oracle detections and the on-disk layout."""
    print("\n" + "=" * 70)
    print("Example 3: Oracle Detections")
    print("=" * 70)

    scene = render_sequence(SceneSpec.demo(frame_count=6))
    vehicles = scene.ground_truth.merged(scene.parked_truth)
    detections = oracle_appearance(vehicles, dropout=0.2, jitter=1.0, pad=2.0, seed=3)
    print(f"\n{len(vehicles)} vehicle boxes, {len(detections)} detections kept")

    with tempfile.TemporaryDirectory() as tmp:
        paths = write_scene(scene, Path(tmp), appearance=detections)
        for name, path in sorted(paths.items()):
            print(f"  {name:<16} {path.relative_to(tmp)}")
        reloaded = SceneSpec.from_yaml(paths["scene"])
        print(f"Reloaded scene has {reloaded.orbit.frame_count} frames")


def example_invalid() -> None:
    """Example 4: Rejected scenes."""
    print("\n" + "=" * 70)
    print("Example 4: Invalid Scenes")
    print("=" * 70)

    try:
        render_sequence(SceneSpec.demo(frame_count=2))
    except InvalidSpec as e:
        print(f"\nRejected: {e}")


if __name__ == "__main__":
    print("\n" + "=" * 70)
    print("skyfuse synth - Usage Examples")
    print("=" * 70)

    example_render()
    example_orbit()
    example_oracle()
    example_invalid()

    print("\n" + "=" * 70)
    print("Examples complete!")
    print("=" * 70 + "\n")

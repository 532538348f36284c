"""
Basic usage examples for georegistration.

Run with: python -m skyfuse.georeg.examples.basic_usage
"""

import tempfile
from pathlib import Path

import numpy as np

from skyfuse.core import Frame
from skyfuse.georeg import (
    PlaneConfig,
    homography_camera_to_plane,
    homography_camera_to_plane_generic,
    load_poses,
    parallax_displacement,
    pose_look_at,
    project_to_plane,
    save_poses,
    stabilize_sequence,
)

K = np.array([[800.0, 0.0, 160.0], [0.0, 800.0, 120.0], [0.0, 0.0, 1.0]])


def orbit(count: int, radius: float = 600.0, altitude: float = 1500.0):
    """Poses on a circle around the world origin, all looking at it."""
    angles = np.linspace(0.0, 0.2, count)
    return [
        pose_look_at([radius * np.cos(a), radius * np.sin(a), altitude], [0.0, 0.0, 0.0], K)
        for a in angles
    ]


def example_closed_form() -> None:
    """Example 1: Closed-form inverse against generic inversion."""
    print("\n" + "=" * 70)
    print("Example 1: Camera-to-Plane Homography")
    print("=" * 70)

    pose = orbit(1)[0]
    closed = homography_camera_to_plane(pose)
    generic = homography_camera_to_plane_generic(pose)
    print(f"\nCamera center: {np.round(pose.center, 1)}")
    print(f"Largest entry difference: {closed.max_abs_difference(generic):.2e}")


def example_parallax() -> None:
    """Example 2: Ground points stay put, roof points drift."""
    print("\n" + "=" * 70)
    print("Example 2: Parallax on the Plane")
    print("=" * 70)

    plane = PlaneConfig.centered(256, 256, 0.25)
    first, last = orbit(2)
    for height in (0.0, 10.0, 30.0):
        shift = parallax_displacement([5.0, 5.0, height], first, last, plane)
        print(f"  Point at {height:4.0f} m drifts {np.hypot(*shift):6.2f} plane px")
    print(f"Plane pixel of the origin: {project_to_plane([0.0, 0.0, 0.0], first, plane)}")


def example_stabilize() -> None:
    """Example 3: Warp a short sequence onto the plane."""
    print("\n" + "=" * 70)
    print("Example 3: Stabilization")
    print("=" * 70)

    rng = np.random.default_rng(0)
    poses = orbit(4)
    frames = [Frame(rng.random((240, 320, 3)), index=i) for i in range(len(poses))]
    plane = PlaneConfig.centered(128, 128, 0.5)

    results = stabilize_sequence(frames, poses, plane, jobs=2)
    for result in results:
        covered = result.valid.count() / (plane.output_width * plane.output_height)
        print(f"  Frame {result.frame.index}: {covered:.0%} of the plane covered")


def example_pose_file() -> None:
    """Example 4: Pose CSV round trip."""
    print("\n" + "=" * 70)
    print("Example 4: Pose Files")
    print("=" * 70)

    poses = dict(enumerate(orbit(3)))
    with tempfile.TemporaryDirectory() as tmp:
        path = save_poses(poses, Path(tmp) / "poses.csv")
        print(f"\n{path.read_text().splitlines()[0]}")
        loaded = load_poses(path)
        print(f"Loaded {len(loaded)} poses, focal length {loaded[0].f:.0f} px")


if __name__ == "__main__":
    print("\n" + "=" * 70)
    print("skyfuse georeg - Usage Examples")
    print("=" * 70)

    example_closed_form()
    example_parallax()
    example_stabilize()
    example_pose_file()

    print("\n" + "=" * 70)
    print("Examples complete!")
    print("=" * 70 + "\n")

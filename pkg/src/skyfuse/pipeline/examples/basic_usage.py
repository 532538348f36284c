"""
Basic usage examples for the end-to-end pipeline.

Run with: python -m skyfuse.pipeline.examples.basic_usage
"""

import tempfile
from pathlib import Path

from skyfuse.core import SequenceConfig
from skyfuse.pipeline import STAGE_NAMES, PipelineConfig, PipelineRunner, StageError, run_pipeline
from skyfuse.synth import SceneSpec, oracle_appearance, render_sequence, write_scene


def make_config(root: Path) -> PipelineConfig:
    """Render a small scene under ``root`` and point a config at it."""
    spec = SceneSpec.demo(frame_count=10)
    scene = render_sequence(spec, jobs=4)
    detections = oracle_appearance(
        scene.ground_truth.merged(scene.parked_truth), dropout=0.1, pad=2.0, seed=1
    )
    paths = write_scene(scene, root / "scene", appearance=detections)
    return PipelineConfig(
        frames_dir=paths["frames"],
        poses_file=paths["poses"],
        detections_file=paths["detections"],
        ground_truth_file=paths["ground_truth"],
        output_dir=root / "work",
        plane=spec.plane_config(),
        sequence=SequenceConfig(temporal_window=5),
        jobs=4,
    )


def example_full_run() -> None:
    """Example 1: Every stage in order."""
    print("\n" + "=" * 70)
    print("Example 1: Full Run")
    print("=" * 70)

    with tempfile.TemporaryDirectory() as tmp:
        config = make_config(Path(tmp))
        manifest = run_pipeline(config)
        print()
        for name in STAGE_NAMES:
            print(f"  {name:<10} {len(manifest.stages[name])} files")
        print(f"Total: {manifest.total_bytes} bytes")
        print((config.output_dir / "metrics.txt").read_text())


def example_overrides() -> None:
    """Example 2: Dotted overrides and a partial rerun."""
    print("\n" + "=" * 70)
    print("Example 2: Overrides and Partial Runs")
    print("=" * 70)

    with tempfile.TemporaryDirectory() as tmp:
        config = make_config(Path(tmp))
        run_pipeline(config)
        config = config.with_overrides({"codec.quality": 50, "evaluation.criterion": "centroid"})
        config.to_yaml(Path(tmp) / "run.yaml")
        manifest = PipelineRunner(config).run(["encode", "eval"])
        print(f"\nQuality {config.codec.quality}, criterion {config.evaluation.criterion}")
        print(f"Stages in manifest: {sorted(manifest.stages)}")


def example_failure() -> None:
    """Example 3: A failing stage leaves a marker."""
    print("\n" + "=" * 70)
    print("Example 3: Stage Failure")
    print("=" * 70)

    with tempfile.TemporaryDirectory() as tmp:
        config = make_config(Path(tmp)).with_overrides({"poses_file": Path(tmp) / "missing.csv"})
        try:
            run_pipeline(config, stages=["stabilize"])
        except StageError as e:
            print(f"\n{e}")
            marker = config.output_dir / "stabilize.partial"
            print(f"{marker.name}: {marker.read_text().strip()}")


if __name__ == "__main__":
    print("\n" + "=" * 70)
    print("skyfuse pipeline - Usage Examples")
    print("=" * 70)

    example_full_run()
    example_overrides()
    example_failure()

    print("\n" + "=" * 70)
    print("Examples complete!")
    print("=" * 70 + "\n")

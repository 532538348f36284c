"""
skyfuse CLI - command-line interface for the detection and compression pipeline.

Provides commands for:
  - Rendering synthetic scenes with ground truth (synth)
  - Running one pipeline stage at a time (stabilize, flux, ingest, fuse, encode, eval)
  - Running the whole pipeline (run) and summarizing a work directory (report)
  - Decoding semantic containers back to frames (decode)
"""

import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, Iterable, NoReturn, Optional

import click
from dotenv import load_dotenv
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape
from rich.table import Table

from . import __version__
from .core.errors import SkyfuseError
from .core.image_io import frame_filename, save_frame
from .core.models import SequenceConfig, ThresholdMode
from .fusion.models import FusionMethod
from .pipeline import (
    MANIFEST_FILE,
    STAGE_MODULES,
    STAGE_NAMES,
    PipelineConfig,
    RunManifest,
    StageError,
    run_pipeline,
)
from .pipeline.stages import COMPRESSION_FILE, METRICS_FILE
from .semcodec.container import decode, read_container
from .synth import SceneSpec, oracle_appearance, render_sequence, write_scene

# SKYFUSE_* variables in a .env file feed the global flags
load_dotenv()

# Rich console for formatted output
console = Console()
err_console = Console(stderr=True)

PIPELINE_FILE = "pipeline.yaml"
# threshold written into synth configs; one dominant mover per scene
SYNTH_THRESHOLD = "relative:0.05"


def _configure_logging(verbose: bool) -> None:
    logger = logging.getLogger("skyfuse")
    logger.handlers.clear()
    logger.addHandler(RichHandler(console=err_console, show_path=False))
    logger.setLevel(logging.INFO if verbose else logging.WARNING)
    logger.propagate = False


def _fail(label: str, error: object) -> NoReturn:
    err_console.print(f"[red]{label} Error:[/red] {escape(str(error))}")
    sys.exit(1)


def _load_config(ctx: click.Context, overrides: Dict[str, Any]) -> PipelineConfig:
    """Config file plus global and command flags; flags win."""
    path = ctx.obj["config"]
    if path is None:
        _fail("Config", "no pipeline config given (use --config or SKYFUSE_CONFIG)")
    try:
        config = PipelineConfig.from_yaml(path)
        return config.with_overrides({"jobs": ctx.obj["jobs"], **overrides})
    except (SkyfuseError, ValidationError, KeyError) as e:
        _fail("Config", e)


def _run_stages(
    ctx: click.Context,
    stages: Optional[Iterable[str]],
    overrides: Optional[Dict[str, Any]] = None,
    grayscale: bool = False,
) -> RunManifest:
    config = _load_config(ctx, overrides or {})
    try:
        return run_pipeline(config, stages, grayscale=grayscale)
    except StageError as e:
        _fail(e.stage.capitalize(), e)
    except SkyfuseError as e:
        _fail("Pipeline", e)
    except Exception as e:
        _fail("Unexpected", f"{type(e).__name__}: {e}")


def _manifest_table(manifest: RunManifest, title: str = "Pipeline artifacts") -> Table:
    table = Table(title=title)
    table.add_column("Stage", style="cyan")
    table.add_column("Module")
    table.add_column("Files", justify="right")
    table.add_column("Bytes", justify="right", style="green")
    for name in STAGE_NAMES:
        if name not in manifest.stages:
            continue
        artifacts = manifest.stages[name]
        table.add_row(
            name, STAGE_MODULES[name], str(len(artifacts)), f"{sum(a.size for a in artifacts):,}"
        )
    return table


def _print_stage_summary(manifest: RunManifest, stages: Iterable[str]) -> None:
    for name in stages:
        artifacts = manifest.stages.get(name, [])
        if artifacts:
            console.print(f"[green]✓ {name}:[/green] {len(artifacts)} files")
        else:
            console.print(f"[yellow]Warning:[/yellow] {name} wrote no files")


@click.group()
@click.version_option(version=__version__, prog_name="skyfuse")
@click.option(
    "--config",
    "config_path",
    type=click.Path(dir_okay=False),
    envvar="SKYFUSE_CONFIG",
    default=None,
    help="Pipeline config YAML",
)
@click.option(
    "--jobs",
    type=click.IntRange(min=1),
    envvar="SKYFUSE_JOBS",
    default=None,
    help="Worker threads per stage (default 1)",
)
@click.option(
    "--seed",
    type=int,
    envvar="SKYFUSE_SEED",
    default=None,
    help="Seed for synthetic scenes and oracle detections",
)
@click.option("--verbose", "-v", is_flag=True, envvar="SKYFUSE_VERBOSE", help="Log stage progress")
@click.pass_context
def cli(
    ctx: click.Context,
    config_path: Optional[str],
    jobs: Optional[int],
    seed: Optional[int],
    verbose: bool,
):
    """
    skyfuse: moving-vehicle detection and semantic compression for aerial video

    Stabilizes frames onto the ground plane, detects motion with the color flux
    tensor, fuses it with vehicle detections and encodes only the movers.

    Examples:
        skyfuse synth scene/
        skyfuse --config scene/pipeline.yaml run
        skyfuse --config scene/pipeline.yaml --jobs 4 flux --threshold otsu
        skyfuse report scene/work
    """
    _configure_logging(verbose)
    ctx.ensure_object(dict)
    ctx.obj.update(config=config_path, jobs=jobs, seed=seed)


@cli.command("synth")
@click.argument("output_dir", type=click.Path(file_okay=False))
@click.option(
    "--spec",
    "spec_path",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="Scene spec YAML (defaults to the built-in demo scene)",
)
@click.option("--frames", type=click.IntRange(min=1), default=None, help="Frames to render")
@click.option("--dropout", type=click.FloatRange(0, 1), default=0.0, help="Detector miss rate")
@click.option("--jitter", type=click.FloatRange(min=0), default=0.0, help="Box edge jitter (px)")
@click.option(
    "--false-positive-rate",
    type=click.FloatRange(0, 1),
    default=0.0,
    help="Probability of one false detection per frame",
)
@click.option("--pad", type=click.FloatRange(min=0), default=2.0, help="Detector box growth (px)")
@click.pass_context
def synth_cmd(
    ctx: click.Context,
    output_dir: str,
    spec_path: Optional[str],
    frames: Optional[int],
    dropout: float,
    jitter: float,
    false_positive_rate: float,
    pad: float,
):
    """
    Render a synthetic scene with ground truth and oracle detections.

    OUTPUT_DIR: Directory for frames, poses, truth files and pipeline.yaml

    Examples:
        skyfuse synth scene/
        skyfuse --seed 3 synth scene/ --spec city.yaml --dropout 0.1 --jitter 1.5
    """
    try:
        spec = SceneSpec.from_yaml(spec_path) if spec_path else SceneSpec.demo()
        updates: Dict[str, Any] = {}
        if frames is not None:
            updates["orbit"] = {**spec.orbit.model_dump(), "frame_count": frames}
        if ctx.obj["seed"] is not None:
            updates["seed"] = ctx.obj["seed"]
        if updates:
            spec = SceneSpec.model_validate({**spec.model_dump(), **updates})

        sequence = SequenceConfig(trace_threshold_mode=ThresholdMode.parse(SYNTH_THRESHOLD))
        scene = render_sequence(
            spec, jobs=ctx.obj["jobs"] or 1, temporal_window=sequence.temporal_window
        )
        oracle = oracle_appearance(
            scene.ground_truth.merged(scene.parked_truth),
            dropout=dropout,
            jitter=jitter,
            false_positive_rate=false_positive_rate,
            pad=pad,
            seed=spec.seed,
            frame_size=(scene.plane.output_width, scene.plane.output_height),
        )
        written = write_scene(scene, output_dir, appearance=oracle)
        config = PipelineConfig(
            frames_dir=Path(written["frames"].name),
            poses_file=Path(written["poses"].name),
            detections_file=Path(written["detections"].name),
            ground_truth_file=Path(written["ground_truth"].name),
            output_dir=Path("work"),
            plane=scene.plane,
            sequence=sequence,
        )
        config_path = config.to_yaml(Path(output_dir) / PIPELINE_FILE)
    except ValidationError as e:
        _fail("Config", e)
    except SkyfuseError as e:
        _fail("Synth", e)

    console.print(
        f"[green]✓ Rendered {len(scene.frames)} frames[/green] "
        f"({len(scene.ground_truth)} moving, {len(scene.parked_truth)} parked vehicle boxes)"
    )
    console.print(f"Run it with: skyfuse --config {config_path} run")


@cli.command("stabilize")
@click.option(
    "--poses",
    "poses_file",
    type=click.Path(exists=True, dir_okay=False, resolve_path=True),
    default=None,
    help="Pose CSV (overrides the config)",
)
@click.pass_context
def stabilize_cmd(ctx: click.Context, poses_file: Optional[str]):
    """Warp raw frames onto the ground plane (georeg)."""
    manifest = _run_stages(ctx, ["stabilize"], {"poses_file": poses_file})
    _print_stage_summary(manifest, ["stabilize"])


@cli.command("flux")
@click.option("--window", type=int, default=None, help="Temporal window (odd, >= 3)")
@click.option(
    "--threshold",
    type=str,
    default=None,
    help="Trace threshold: fixed:V, percentile:P, relative:F or otsu",
)
@click.option("--grayscale", is_flag=True, help="Filter luminance instead of color")
@click.pass_context
def flux_cmd(ctx: click.Context, window: Optional[int], threshold: Optional[str], grayscale: bool):
    """
    Compute flux traces and motion masks on the stabilized frames (fluxtensor).

    Examples:
        skyfuse --config run.yaml flux --threshold otsu
        skyfuse --config run.yaml flux --window 7 --grayscale
    """
    overrides: Dict[str, Any] = {"sequence.temporal_window": window}
    if threshold is not None:
        try:
            overrides["sequence.trace_threshold_mode"] = ThresholdMode.parse(threshold)
        except ValueError as e:
            _fail("Config", e)
    manifest = _run_stages(ctx, ["flux"], overrides, grayscale=grayscale)
    _print_stage_summary(manifest, ["flux"])


@cli.command("ingest")
@click.option(
    "--detections",
    "detections_file",
    type=click.Path(exists=True, dir_okay=False, resolve_path=True),
    default=None,
    help="Detection CSV (overrides the config)",
)
@click.option(
    "--classes",
    type=str,
    default=None,
    help="Comma-separated detector classes merged into the vehicle class",
)
@click.option(
    "--min-conf",
    "--min-confidence",
    "min_confidence",
    type=click.FloatRange(0, 1),
    default=None,
    help="Lowest detector score kept",
)
@click.option(
    "--image-coordinates",
    is_flag=True,
    help="Detections are in raw-frame pixels; warp them onto the plane",
)
@click.pass_context
def ingest_cmd(
    ctx: click.Context,
    detections_file: Optional[str],
    classes: Optional[str],
    min_confidence: Optional[float],
    image_coordinates: bool,
):
    """
    Rasterize vehicle detections on the plane (appearance).

    Examples:
        skyfuse --config run.yaml ingest --classes car,van --min-conf 0.4
        skyfuse --config run.yaml ingest --detections yolo.csv --image-coordinates
    """
    vehicle_classes = None
    if classes is not None:
        vehicle_classes = [c.strip() for c in classes.split(",") if c.strip()]
        if not vehicle_classes:
            _fail("Config", f"--classes '{classes}' names no class")
    overrides = {
        "detections_file": detections_file,
        "appearance.vehicle_classes": vehicle_classes,
        "appearance.min_confidence": min_confidence,
        "appearance.image_coordinates": image_coordinates or None,
    }
    manifest = _run_stages(ctx, ["ingest"], overrides)
    _print_stage_summary(manifest, ["ingest"])


@cli.command("fuse")
@click.option(
    "--method",
    type=click.Choice([m.value for m in FusionMethod]),
    default=None,
    help="Detector variant whose moving-vehicle masks are written",
)
@click.pass_context
def fuse_cmd(ctx: click.Context, method: Optional[str]):
    """Label motion blobs and aggregate buildings (fusion)."""
    manifest = _run_stages(ctx, ["fuse"], {"fusion.method": method})
    _print_stage_summary(manifest, ["fuse"])


@cli.command("encode")
@click.option("--quality", type=click.IntRange(1, 100), default=None, help="JPEG quality")
@click.option("--report", "show_report", is_flag=True, help="Print the bandwidth table")
@click.pass_context
def encode_cmd(ctx: click.Context, quality: Optional[int], show_report: bool):
    """
    Encode the moving vehicles over one base frame (semcodec).

    The bandwidth table is always written to compression.txt; --report also prints it.
    """
    manifest = _run_stages(ctx, ["encode"], {"codec.quality": quality})
    _print_stage_summary(manifest, ["encode"])
    report = Path(_load_config(ctx, {}).output_dir) / COMPRESSION_FILE
    if show_report and report.is_file():
        console.print(report.read_text(), markup=False, soft_wrap=True)


@cli.command("eval")
@click.option("--criterion", type=str, default=None, help="iou[:threshold] or centroid")
@click.option("--optimal", is_flag=True, help="Maximum-cardinality matching")
@click.pass_context
def eval_cmd(ctx: click.Context, criterion: Optional[str], optimal: bool):
    """Score every detector variant against ground truth (evaluation)."""
    overrides = {"evaluation.criterion": criterion, "evaluation.optimal": optimal or None}
    manifest = _run_stages(ctx, ["eval"], overrides)
    _print_stage_summary(manifest, ["eval"])
    metrics = Path(_load_config(ctx, {}).output_dir) / METRICS_FILE
    if manifest.stages.get("eval") and metrics.is_file():
        console.print(metrics.read_text(), markup=False, soft_wrap=True)


@cli.command("run")
@click.option(
    "--output",
    "output_dir",
    type=click.Path(file_okay=False),
    default=None,
    help="Work directory (overrides the config)",
)
@click.option(
    "--poses",
    "poses_file",
    type=click.Path(exists=True, dir_okay=False, resolve_path=True),
    default=None,
    help="Pose CSV (overrides the config)",
)
@click.option(
    "--detections",
    "detections_file",
    type=click.Path(exists=True, dir_okay=False, resolve_path=True),
    default=None,
    help="Detection CSV (overrides the config)",
)
@click.option("--grayscale", is_flag=True, help="Filter luminance instead of color")
@click.pass_context
def run_cmd(
    ctx: click.Context,
    output_dir: Optional[str],
    poses_file: Optional[str],
    detections_file: Optional[str],
    grayscale: bool,
):
    """
    Run every stage in order: stabilize, flux, ingest, fuse, encode, eval.

    Examples:
        skyfuse --config scene/pipeline.yaml run
        skyfuse --config scene/pipeline.yaml --jobs 4 run --output /tmp/work
    """
    overrides = {
        "output_dir": output_dir,
        "poses_file": poses_file,
        "detections_file": detections_file,
    }
    manifest = _run_stages(ctx, None, overrides, grayscale=grayscale)
    console.print(_manifest_table(manifest))
    console.print(f"[green]✓ Pipeline complete:[/green] {manifest.total_bytes:,} bytes written")


@cli.command("decode")
@click.argument("container", type=click.Path(exists=True, dir_okay=False))
@click.argument("output_dir", type=click.Path(file_okay=False))
@click.option(
    "--composite/--no-composite",
    default=True,
    help="Paste moving vehicles over the base frame, or leave the background black",
)
def decode_cmd(container: str, output_dir: str, composite: bool):
    """
    Decode a semantic container into PNG frames.

    CONTAINER: A .svc file written by the encode stage

    OUTPUT_DIR: Directory for the decoded frames
    """
    try:
        frames = decode(read_container(container), composite=composite)
        for frame in frames:
            save_frame(frame, Path(output_dir) / frame_filename(frame.index))
    except SkyfuseError as e:
        _fail("Decode", e)
    console.print(f"[green]✓ Decoded {len(frames)} frames[/green] to {output_dir}")


@cli.command("report")
@click.argument("work_dir", type=click.Path(exists=True, file_okay=False))
def report_cmd(work_dir: str):
    """
    Summarize a pipeline work directory.

    WORK_DIR: The output directory of a pipeline run
    """
    directory = Path(work_dir)
    manifest_path = directory / MANIFEST_FILE
    if not manifest_path.is_file():
        _fail("Report", f"no {MANIFEST_FILE} in {directory}")
    try:
        manifest = RunManifest.from_dict(json.loads(manifest_path.read_text()))
    except (ValueError, KeyError, TypeError) as e:
        _fail("Report", f"unreadable {manifest_path}: {e}")

    console.print(_manifest_table(manifest, title=f"Pipeline artifacts ({directory})"))
    if manifest.failed_stage:
        console.print(f"[yellow]Warning:[/yellow] stage {manifest.failed_stage} failed")
    for name in (COMPRESSION_FILE, METRICS_FILE):
        if (directory / name).is_file():
            console.print((directory / name).read_text(), markup=False, soft_wrap=True)


if __name__ == "__main__":
    cli()

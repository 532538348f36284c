"""
The six pipeline stages.

Stages talk to each other only through files in the output directory, so each
one can be rerun on its own. Every stage returns the paths it wrote.
"""

import logging
from pathlib import Path
from typing import Dict, List, Mapping

from ..appearance.detection_io import load_detections, load_ground_truth, write_detections
from ..appearance.rasterize import appearance_masks, warp_bbox
from ..core.errors import DimensionMismatch, EmptySequence
from ..core.image_io import (
    frame_filename,
    list_sequence,
    load_frame,
    load_mask,
    save_frame,
    save_mask,
    save_trace,
    trace_scale_path,
)
from ..core.models import BBox, BinaryMask, DetectionSet, Frame
from ..evaluation.metrics import evaluate, method_ladder_table
from ..fluxtensor.motion import motion_masks
from ..fusion.buildings import write_building_tracks
from ..fusion.detect import detect, fuse_sequence
from ..fusion.models import FusionMethod
from ..fusion.overlay import write_overlay
from ..georeg.pose_io import PoseFileError, load_poses
from ..georeg.projection import camera_to_plane_pixels
from ..georeg.warp import stabilize_sequence
from ..semcodec.container import encode, write_container
from ..semcodec.report import (
    compression_report,
    lossless_reference_bytes,
    raw_reference_bytes,
    render_text,
    report_table,
)
from .models import PipelineConfig

logger = logging.getLogger(__name__)

STABILIZED_DIR = "stabilized"
VALID_DIR = "valid"
FLUX_DIR = "flux"
MOTION_DIR = "motion"
APPEARANCE_DIR = "appearance"
PLANE_DETECTIONS_FILE = "appearance/detections.csv"
MOVING_DIR = "fusion/moving"
BUILDING_DIR = "fusion/building"
OVERLAY_DIR = "fusion/overlays"
CATEGORIZED_FILE = "fusion/categorized.csv"
BUILDING_TRACKS_FILE = "fusion/building_tracks.csv"
CONTAINER_FILE = "semantic.svc"
COMPRESSION_FILE = "compression.txt"
METRICS_FILE = "metrics.txt"


def _load_frames(directory: Path) -> List[Frame]:
    files = list_sequence(directory)
    if not files:
        raise EmptySequence(f"No frames in {directory}")
    return [load_frame(path, index) for index, path in files.items()]


def _load_masks(directory: Path) -> Dict[int, BinaryMask]:
    return {index: load_mask(path) for index, path in list_sequence(directory).items()}


def _save_masks(masks: Mapping[int, BinaryMask], directory: Path) -> List[Path]:
    return [save_mask(masks[i], directory / frame_filename(i)) for i in sorted(masks)]


def run_stabilize(config: PipelineConfig) -> List[Path]:
    """Warp every raw frame onto the plane; write frames and validity masks."""
    out = config.output_dir
    frames = _load_frames(config.frames_dir)
    poses = load_poses(config.poses_file)
    missing = [f.index for f in frames if f.index not in poses]
    if missing:
        raise PoseFileError(f"{config.poses_file} has no pose for frames {missing}")

    results = stabilize_sequence(
        frames, [poses[f.index] for f in frames], config.plane, jobs=config.jobs
    )
    written = []
    for result in results:
        name = frame_filename(result.frame.index)
        written.append(save_frame(result.frame, out / STABILIZED_DIR / name))
        written.append(save_mask(result.valid, out / VALID_DIR / name))
    return written


def run_flux(config: PipelineConfig, grayscale: bool = False) -> List[Path]:
    """Flux traces and motion masks for the interior frames."""
    out = config.output_dir
    frames = _load_frames(out / STABILIZED_DIR)
    valid = _load_masks(out / VALID_DIR)
    if sorted(valid) != [f.index for f in frames]:
        raise DimensionMismatch(f"{out / VALID_DIR} does not match {out / STABILIZED_DIR}")

    results = motion_masks(
        frames,
        config.sequence,
        valid_masks=[valid[f.index] for f in frames],
        jobs=config.jobs,
        grayscale=grayscale,
    )
    written = []
    for result in results:
        name = frame_filename(result.frame_index)
        if result.threshold.degenerate:
            logger.warning(f"Frame {result.frame_index}: degenerate motion threshold")
        trace_path = save_trace(result.flux.values, out / FLUX_DIR / name)
        written += [trace_path, trace_scale_path(trace_path)]
        written.append(save_mask(result.threshold.mask, out / MOTION_DIR / name))
    return written


def _plane_detections(config: PipelineConfig) -> DetectionSet:
    settings = config.appearance
    if config.detections_file is None:
        logger.warning("No detections file configured; appearance masks are empty")
        return DetectionSet()
    detections = load_detections(
        config.detections_file, settings.vehicle_classes, settings.min_confidence
    )
    if not settings.image_coordinates:
        return detections

    poses = load_poses(config.poses_file)
    warped: List[BBox] = []
    for index in detections.frame_indices:
        if index not in poses:
            logger.warning(f"Frame {index}: detections without a pose are dropped")
            continue
        H = camera_to_plane_pixels(poses[index], config.plane)
        for box in detections.for_frame(index):
            mapped = warp_bbox(box, H)
            if mapped is not None:
                warped.append(mapped)
    return DetectionSet.from_boxes(warped, dict(detections.unknown_labels))


def run_ingest(config: PipelineConfig) -> List[Path]:
    """Rasterize vehicle detections on the plane, one mask per stabilized frame."""
    out = config.output_dir
    frame_indices = list(list_sequence(out / STABILIZED_DIR))
    detections = _plane_detections(config)
    masks = appearance_masks(
        detections, frame_indices, config.plane.output_width, config.plane.output_height
    )
    written = _save_masks(masks, out / APPEARANCE_DIR)
    written.append(write_detections(detections, out / PLANE_DETECTIONS_FILE))
    return written


def _moving_masks(
    method: FusionMethod,
    motion: Mapping[int, BinaryMask],
    appearance: Mapping[int, BinaryMask],
    fused: Mapping[int, BinaryMask],
) -> Dict[int, BinaryMask]:
    if method == FusionMethod.MOTION:
        return dict(motion)
    if method == FusionMethod.APPEARANCE:
        return {i: appearance[i] for i in motion}
    return dict(fused)


def run_fuse(config: PipelineConfig) -> List[Path]:
    """Label motion blobs, aggregate buildings and write the moving-vehicle masks."""
    out = config.output_dir
    settings = config.fusion
    motion = _load_masks(out / MOTION_DIR)
    appearance = _load_masks(out / APPEARANCE_DIR)
    if not motion:
        raise EmptySequence(f"No motion masks in {out / MOTION_DIR}")

    result = fuse_sequence(
        motion,
        appearance,
        config.sequence,
        overlap_fraction=settings.overlap_fraction,
        building_filter=settings.method == FusionMethod.MOTION_APPEARANCE_BUILDING,
        iou_link=settings.iou_link,
    )
    outputs = result.by_frame()
    fused = {i: outputs[i].moving_vehicle_mask for i in outputs}
    moving = _moving_masks(settings.method, motion, appearance, fused)

    written = _save_masks(moving, out / MOVING_DIR)
    written += _save_masks({i: outputs[i].building_mask for i in outputs}, out / BUILDING_DIR)
    written.append(write_detections(result.categorized(), out / CATEGORIZED_FILE))
    written.append(write_building_tracks(result.tracks, out / BUILDING_TRACKS_FILE))
    if settings.overlays:
        stabilized = list_sequence(out / STABILIZED_DIR)
        for index, output in outputs.items():
            frame = load_frame(stabilized[index], index)
            written.append(write_overlay(frame, output, out / OVERLAY_DIR / frame_filename(index)))
    return written


def run_encode(config: PipelineConfig) -> List[Path]:
    """Encode the fused frames as a semantic container and write its bandwidth table."""
    out = config.output_dir
    moving = _load_masks(out / MOVING_DIR)
    if not moving:
        raise EmptySequence(f"No moving-vehicle masks in {out / MOVING_DIR}")
    stabilized = list_sequence(out / STABILIZED_DIR)
    frames = [load_frame(stabilized[i], i) for i in sorted(moving)]
    masks = [moving[i] for i in sorted(moving)]

    container = encode(frames, masks, config.codec.quality, config.jobs)
    report = compression_report(
        container,
        lossless_reference_bytes(frames),
        raw_reference_bytes(frames),
        label=config.fusion.method.label,
    )
    report_path = out / COMPRESSION_FILE
    report_path.write_text(render_text(report_table([report])))
    return [write_container(container, out / CONTAINER_FILE), report_path]


def run_eval(config: PipelineConfig) -> List[Path]:
    """Score every method of the ladder against ground truth; skipped without it."""
    out = config.output_dir
    if config.ground_truth_file is None:
        logger.warning("No ground-truth file configured; skipping evaluation")
        return []
    gt = load_ground_truth(config.ground_truth_file)
    motion = _load_masks(out / MOTION_DIR)
    appearance = _load_masks(out / APPEARANCE_DIR)
    match = config.evaluation.match_config()

    rows = []
    for method in config.evaluation.methods:
        detections = detect(
            method,
            motion,
            appearance,
            config.sequence,
            overlap_fraction=config.fusion.overlap_fraction,
            iou_link=config.fusion.iou_link,
        )
        rows.append((method.label, evaluate(gt, detections, match, frames=motion)))
    path = out / METRICS_FILE
    path.write_text(render_text(method_ladder_table(rows)))
    return [path]

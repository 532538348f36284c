"""
Writes a rendered scene in the pipeline's input formats.
"""

import logging
from pathlib import Path
from typing import Dict, Optional, Union

from ..appearance.detection_io import write_detections
from ..core.image_io import frame_filename, save_frame
from ..core.models import DetectionSet
from ..georeg.pose_io import save_poses
from .models import SceneOutputs

logger = logging.getLogger(__name__)

FRAMES_DIR = "frames"
POSES_FILE = "poses.csv"
GROUND_TRUTH_FILE = "ground_truth.csv"
PARKED_TRUTH_FILE = "parked_truth.csv"
BUILDING_TRUTH_FILE = "building_truth.csv"
DETECTIONS_FILE = "detections.csv"
SCENE_FILE = "scene.yaml"

# class written for oracle detections; one of the detector's vehicle classes
ORACLE_CLASS = "car"


def write_scene(
    outputs: SceneOutputs,
    directory: Union[str, Path],
    appearance: Optional[DetectionSet] = None,
) -> Dict[str, Path]:
    """
    Write frames, poses, truth boxes and optional oracle detections.

    Layout::

        frames/frame_0000.png ...
        poses.csv
        ground_truth.csv        moving vehicles, class GT
        parked_truth.csv        parked vehicles, class GT
        building_truth.csv      roof boxes, class Building
        detections.csv          oracle detections, class car (if given)
        scene.yaml

    Returns:
        Written paths by name, frames under ``"frames"`` as the directory
    """
    directory = Path(directory)
    frames_dir = directory / FRAMES_DIR
    frames_dir.mkdir(parents=True, exist_ok=True)
    for frame in outputs.frames:
        save_frame(frame, frames_dir / frame_filename(frame.index))

    written = {
        "frames": frames_dir,
        "poses": save_poses(outputs.poses, directory / POSES_FILE),
        "ground_truth": write_detections(
            outputs.ground_truth, directory / GROUND_TRUTH_FILE, label="GT"
        ),
        "parked_truth": write_detections(
            outputs.parked_truth, directory / PARKED_TRUTH_FILE, label="GT"
        ),
        "building_truth": write_detections(
            outputs.building_truth, directory / BUILDING_TRUTH_FILE
        ),
        "scene": outputs.spec.to_yaml(directory / SCENE_FILE),
    }
    if appearance is not None:
        written["detections"] = write_detections(
            appearance, directory / DETECTIONS_FILE, label=ORACLE_CLASS
        )
    logger.info(f"Wrote {len(outputs.frames)} frames and scene truth to {directory}")
    return written

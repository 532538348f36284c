"""
Pose file reading and writing.

One comma-separated record per frame after a header line::

    frame_index,f,u,v,r11,r12,r13,r21,r22,r23,r31,r32,r33,t1,t2,t3

R is the world-to-camera rotation in row-major order and t the
world-to-camera translation in meters.
"""

import csv
import logging
from pathlib import Path
from typing import Dict, Mapping, Union

import numpy as np

from ..core.errors import SkyfuseError
from ..core.models import CameraPose

logger = logging.getLogger(__name__)

POSE_HEADER = (
    ["frame_index", "f", "u", "v"]
    + [f"r{i}{j}" for i in range(1, 4) for j in range(1, 4)]
    + ["t1", "t2", "t3"]
)


class PoseFileError(SkyfuseError):
    """Raised when a pose file cannot be parsed."""

    def __init__(self, message: str, line: int = 0):
        self.line = line
        prefix = f"line {line}: " if line else ""
        super().__init__(f"{prefix}{message}")


def load_poses(path: Union[str, Path]) -> Dict[int, CameraPose]:
    """
    Read a pose file.

    Args:
        path: Pose CSV file

    Returns:
        Mapping frame_index -> CameraPose, in ascending frame order

    Raises:
        PoseFileError: If the file is missing, malformed, repeats a frame
            index or holds an invalid rotation
    """
    path = Path(path)
    if not path.is_file():
        raise PoseFileError(f"Pose file not found: {path}")

    poses: Dict[int, CameraPose] = {}
    with path.open(newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != POSE_HEADER:
            raise PoseFileError("missing or unexpected header", line=1)
        for line_number, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(POSE_HEADER):
                raise PoseFileError(
                    f"expected {len(POSE_HEADER)} fields, got {len(row)}", line=line_number
                )
            try:
                index = int(row[0])
                values = [float(cell) for cell in row[1:]]
            except ValueError as exc:
                raise PoseFileError(f"not a number ({exc})", line=line_number) from exc
            if index < 0:
                raise PoseFileError(f"negative frame index {index}", line=line_number)
            if index in poses:
                raise PoseFileError(f"duplicate frame index {index}", line=line_number)
            f, u, v = values[0:3]
            R = np.array(values[3:12]).reshape(3, 3)
            t = np.array(values[12:15])
            try:
                poses[index] = CameraPose.from_intrinsics(f, u, v, R, t)
            except ValueError as exc:
                raise PoseFileError(str(exc), line=line_number) from exc

    logger.debug(f"Loaded {len(poses)} poses from {path}")
    return dict(sorted(poses.items()))


def save_poses(poses: Mapping[int, CameraPose], path: Union[str, Path]) -> Path:
    """Write poses in ascending frame order, full float precision."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(POSE_HEADER)
        for index in sorted(poses):
            pose = poses[index]
            values = [pose.f, pose.u, pose.v, *pose.R.ravel(), *pose.t]
            writer.writerow([index] + [repr(float(x)) for x in values])
    return path

"""
Core module for skyfuse.

Domain types (frames, masks, poses, homographies, boxes), raster I/O and the
sequence configuration shared by every other module.
"""

from .errors import (
    SkyfuseError,
    UnreadableImage,
    UnsupportedBitDepth,
    SingularMatrix,
    DimensionMismatch,
    DegeneratePose,
    EmptySequence,
)
from .models import (
    Frame,
    BinaryMask,
    Homography,
    CameraPose,
    Category,
    BBox,
    DetectionSet,
    ThresholdKind,
    ThresholdMode,
    SequenceConfig,
)
from .homography import normalize_homography, apply_homography
from .image_io import (
    load_frame,
    save_frame,
    load_mask,
    save_mask,
    save_trace,
    trace_scale_path,
    load_trace,
    luminance,
    encode_image,
    decode_image,
    frame_to_uint8,
    frame_from_uint8,
    frame_filename,
    frame_index_from_name,
    list_sequence,
)

__all__ = [
    "SkyfuseError",
    "UnreadableImage",
    "UnsupportedBitDepth",
    "SingularMatrix",
    "DimensionMismatch",
    "DegeneratePose",
    "EmptySequence",
    "Frame",
    "BinaryMask",
    "Homography",
    "CameraPose",
    "Category",
    "BBox",
    "DetectionSet",
    "ThresholdKind",
    "ThresholdMode",
    "SequenceConfig",
    "normalize_homography",
    "apply_homography",
    "load_frame",
    "save_frame",
    "load_mask",
    "save_mask",
    "save_trace",
    "trace_scale_path",
    "load_trace",
    "luminance",
    "encode_image",
    "decode_image",
    "frame_to_uint8",
    "frame_from_uint8",
    "frame_filename",
    "frame_index_from_name",
    "list_sequence",
]

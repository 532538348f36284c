"""
Semantic video compression for skyfuse.

A sequence is sent as one lossless base frame followed by abstract frames
that keep only the ROI pixels (moving vehicles) and zero the rest. The
receiver composites each abstract frame's ROI onto the base frame, or
overlays the abstract frames on a map it already holds.

Example:
    >>> from skyfuse.semcodec import encode, decode, compression_report
    >>> container = encode(frames, moving_masks, quality=75)
    >>> frames_out = decode(container, composite=True)
"""

from .models import (
    MEGABYTE,
    CONTAINER_MAGIC,
    CONTAINER_VERSION,
    DEFAULT_QUALITY,
    LOSSLESS_QUALITY,
    ContainerHeader,
    AbstractFrame,
    SemanticContainer,
    FrameCost,
    CompressionReport,
    compression_ratio,
    format_ratio,
    megabytes,
)
from .container import (
    CorruptContainer,
    encode_mask_rle,
    decode_mask_rle,
    encode_abstract_frame,
    encode,
    decode,
    serialize,
    parse,
    write_container,
    read_container,
)
from .report import (
    lossless_reference_bytes,
    raw_reference_bytes,
    compression_report,
    compare_methods,
    report_table,
    render_text,
)

__all__ = [
    "MEGABYTE",
    "CONTAINER_MAGIC",
    "CONTAINER_VERSION",
    "DEFAULT_QUALITY",
    "LOSSLESS_QUALITY",
    "ContainerHeader",
    "AbstractFrame",
    "SemanticContainer",
    "FrameCost",
    "CompressionReport",
    "compression_ratio",
    "format_ratio",
    "megabytes",
    "CorruptContainer",
    "encode_mask_rle",
    "decode_mask_rle",
    "encode_abstract_frame",
    "encode",
    "decode",
    "serialize",
    "parse",
    "write_container",
    "read_container",
    "lossless_reference_bytes",
    "raw_reference_bytes",
    "compression_report",
    "compare_methods",
    "report_table",
    "render_text",
]

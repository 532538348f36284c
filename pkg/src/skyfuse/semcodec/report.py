"""
Compression accounting: container sizes against lossless and raw references.
"""

import io
import logging
from typing import List, Mapping, Optional, Sequence

from rich.console import Console
from rich.table import Table

from ..core.image_io import encode_image, frame_to_uint8
from ..core.models import BinaryMask, Frame
from .container import encode, serialize
from .models import (
    DEFAULT_QUALITY,
    CompressionReport,
    FrameCost,
    SemanticContainer,
    format_ratio,
    megabytes,
)

logger = logging.getLogger(__name__)


def lossless_reference_bytes(frames: Sequence[Frame]) -> int:
    """Bytes of every frame compressed as lossless PNG."""
    return sum(len(encode_image(frame_to_uint8(f), ".png")) for f in frames)


def raw_reference_bytes(frames: Sequence[Frame]) -> int:
    """Bytes of every frame stored uncompressed at 8 bits per channel."""
    return sum(f.width * f.height * f.channels for f in frames)


def compression_report(
    container: SemanticContainer,
    reference_lossless_bytes: int,
    reference_raw_bytes: int,
    label: str = "semantic",
) -> CompressionReport:
    """
    Account a container's bytes against its references.

    Args:
        container: Encoded sequence
        reference_lossless_bytes: Size of the sequence compressed losslessly
        reference_raw_bytes: Size of the sequence uncompressed
        label: Row name in report tables

    Returns:
        CompressionReport with SCR, raw ratio, map-overlay ratio and a
        per-frame breakdown

    Raises:
        ValueError: If a reference size is not positive

    Example:
        >>> report = compression_report(container, 1_070_000_000, 2_400_000_000)
        >>> format_ratio(report.scr)
        '66:1'
    """
    if reference_lossless_bytes <= 0 or reference_raw_bytes <= 0:
        raise ValueError(
            f"Reference sizes must be positive, got {reference_lossless_bytes} "
            f"and {reference_raw_bytes}"
        )
    per_frame = [
        FrameCost(a.frame_index, len(a.image), len(a.mask_rle)) for a in container.abstract_frames
    ]
    report = CompressionReport(
        label=label,
        container_bytes=len(serialize(container)),
        base_bytes=len(container.base_frame),
        abstract_bytes=sum(c.image_bytes for c in per_frame),
        mask_bytes=sum(c.mask_bytes for c in per_frame),
        reference_lossless_bytes=int(reference_lossless_bytes),
        reference_raw_bytes=int(reference_raw_bytes),
        per_frame=per_frame,
    )
    logger.info(f"{label}: {report.container_bytes} bytes, SCR {format_ratio(report.scr)}")
    return report


def compare_methods(
    frames: Sequence[Frame],
    masks_by_method: Mapping[str, Sequence[BinaryMask]],
    quality: int = DEFAULT_QUALITY,
    jobs: int = 1,
) -> List[CompressionReport]:
    """
    Encode the same frames once per method's masks and report each.

    Args:
        frames: Frames to encode
        masks_by_method: method label -> ROI masks (as accepted by ``encode``)
        quality: Abstract-frame quality
        jobs: Worker threads per encode

    Returns:
        One report per method, in mapping order
    """
    lossless = lossless_reference_bytes(frames)
    raw = raw_reference_bytes(frames)
    return [
        compression_report(encode(frames, masks, quality, jobs), lossless, raw, label)
        for label, masks in masks_by_method.items()
    ]


def report_table(reports: Sequence[CompressionReport], title: Optional[str] = None) -> Table:
    """A bandwidth table with one row per report plus the two reference rows."""
    table = Table(title=title or "Data transfer bandwidth")
    table.add_column("Method", style="cyan")
    table.add_column("Base frame (MB)", justify="right")
    table.add_column("Masks (MB)", justify="right")
    table.add_column("Total (MB)", justify="right")
    table.add_column("SCR", justify="right", style="green")
    table.add_column("Map overlay", justify="right")
    if reports:
        first = reports[0]
        raw_ratio = first.reference_raw_bytes / first.reference_lossless_bytes
        raw_mb = f"{megabytes(first.reference_raw_bytes):.2f}"
        table.add_row("Original video (raw)", "-", "-", raw_mb, "-", "-")
        table.add_row(
            "Original video (PNG, lossless)",
            "-",
            "-",
            f"{megabytes(first.reference_lossless_bytes):.2f}",
            f"{format_ratio(raw_ratio)} vs raw",
            "-",
        )
    for report in reports:
        table.add_row(
            report.label,
            f"{megabytes(report.base_bytes):.2f}",
            f"{megabytes(report.container_bytes - report.base_bytes):.2f}",
            f"{megabytes(report.container_bytes):.2f}",
            format_ratio(report.scr),
            format_ratio(report.map_overlay_ratio),
        )
    return table


def render_text(table: Table, width: int = 120) -> str:
    """Render a rich table as plain aligned text."""
    buffer = io.StringIO()
    Console(file=buffer, width=width, color_system=None, force_terminal=False).print(table)
    return buffer.getvalue()

"""
Data models for semantic video compression.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

# Sizes in the report are megabytes of 10^6 bytes.
MEGABYTE = 1_000_000

CONTAINER_MAGIC = b"SKYSVC"
CONTAINER_VERSION = 1
DEFAULT_QUALITY = 75
LOSSLESS_QUALITY = 100


@dataclass(frozen=True)
class ContainerHeader:
    """Fixed-size header of a semantic container.

    Attributes:
        version: Container format version
        frame_count: Base frame plus abstract frames
        width: Frame width (px)
        height: Frame height (px)
        channels: 1 (gray) or 3 (RGB)
        quality: JPEG quality of the abstract frames; 100 means lossless PNG
    """

    version: int
    frame_count: int
    width: int
    height: int
    channels: int
    quality: int

    @property
    def lossless(self) -> bool:
        return self.quality == LOSSLESS_QUALITY


@dataclass(frozen=True)
class AbstractFrame:
    """One encoded ROI frame: background zeroed, then compressed.

    Attributes:
        frame_index: Index of the source frame
        image: PNG or JPEG bytes of the masked frame
        mask_rle: zlib-compressed run lengths of the ROI mask
    """

    frame_index: int
    image: bytes
    mask_rle: bytes


@dataclass(frozen=True)
class SemanticContainer:
    """A base frame plus ordered abstract frames, all of one size."""

    header: ContainerHeader
    base_index: int
    base_frame: bytes
    abstract_frames: Tuple[AbstractFrame, ...] = ()

    @property
    def frame_indices(self) -> Tuple[int, ...]:
        return (self.base_index,) + tuple(a.frame_index for a in self.abstract_frames)


@dataclass(frozen=True)
class FrameCost:
    """Bytes spent on one abstract frame."""

    frame_index: int
    image_bytes: int
    mask_bytes: int


@dataclass
class CompressionReport:
    """Byte accounting of one container against its references.

    Attributes:
        label: Method or file the container was built from
        container_bytes: Serialized container size
        base_bytes: Base-frame PNG size
        abstract_bytes: Sum of abstract-frame image sizes
        mask_bytes: Sum of mask run-length sizes
        reference_lossless_bytes: All frames compressed losslessly
        reference_raw_bytes: All frames uncompressed
        per_frame: Cost of each abstract frame
    """

    label: str
    container_bytes: int
    base_bytes: int
    abstract_bytes: int
    mask_bytes: int
    reference_lossless_bytes: int
    reference_raw_bytes: int
    per_frame: List[FrameCost] = field(default_factory=list)

    @property
    def overhead_bytes(self) -> int:
        """Header and length prefixes."""
        return self.container_bytes - self.base_bytes - self.abstract_bytes - self.mask_bytes

    @property
    def scr(self) -> float:
        """Semantic compression ratio against the lossless reference."""
        return compression_ratio(self.reference_lossless_bytes, self.container_bytes)

    @property
    def raw_ratio(self) -> float:
        return compression_ratio(self.reference_raw_bytes, self.container_bytes)

    @property
    def map_overlay_ratio(self) -> Optional[float]:
        """Ratio when the receiver already holds a map and the base frame is not sent."""
        without_base = self.container_bytes - self.base_bytes
        if without_base <= 0:
            return None
        return compression_ratio(self.reference_lossless_bytes, without_base)


def compression_ratio(reference_bytes: float, compressed_bytes: float) -> float:
    """
    Reference size over compressed size.

    Example:
        >>> round(compression_ratio(1070, 6.0 + 10.3))
        66
    """
    if reference_bytes <= 0 or compressed_bytes <= 0:
        raise ValueError(
            f"Sizes must be positive, got {reference_bytes} and {compressed_bytes}"
        )
    return float(reference_bytes) / float(compressed_bytes)


def format_ratio(ratio: Optional[float]) -> str:
    """``66:1`` for ratios of at least 10, ``2.2:1`` below."""
    if ratio is None:
        return "-"
    return f"{ratio:.0f}:1" if ratio >= 10 else f"{ratio:.1f}:1"


def megabytes(n_bytes: float) -> float:
    return n_bytes / MEGABYTE

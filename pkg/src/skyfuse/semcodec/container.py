"""
Semantic container encoding, decoding and serialization.

Layout (little-endian)::

    header   magic[6] version:u16 frame_count:u32 width:u32 height:u32
             channels:u8 quality:u8
    base     frame_index:u32 length:u32 png[length]
    abstract frame_index:u32 image_length:u32 mask_length:u32
             image[image_length] mask[mask_length]      (frame_count - 1 times)

The mask is stored as zlib-compressed uint32 run lengths over the row-major
pixels, alternating false/true and starting with false. Decoding composites
exactly the encoder's ROI instead of re-thresholding decoded JPEG black.
"""

import logging
import struct
import zlib
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import List, Sequence, Union

import numpy as np

from ..core.errors import DimensionMismatch, EmptySequence, SkyfuseError, UnreadableImage
from ..core.image_io import decode_image, encode_image, frame_to_uint8
from ..core.models import BinaryMask, Frame
from .models import (
    CONTAINER_MAGIC,
    CONTAINER_VERSION,
    DEFAULT_QUALITY,
    LOSSLESS_QUALITY,
    AbstractFrame,
    ContainerHeader,
    SemanticContainer,
)

logger = logging.getLogger(__name__)

_PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"
_JPEG_SIGNATURE = b"\xff\xd8\xff"

PathLike = Union[str, Path]

_HEADER = struct.Struct("<6sHIIIBB")
_BASE = struct.Struct("<II")
_ABSTRACT = struct.Struct("<III")


class CorruptContainer(SkyfuseError):
    """Raised when container bytes fail a magic, version or length check."""

    pass


# ============================================================================
# Mask run lengths
# ============================================================================


def encode_mask_rle(mask: BinaryMask) -> bytes:
    """Run lengths of the row-major mask, false run first, zlib-compressed."""
    flat = mask.bits.ravel()
    changes = np.flatnonzero(flat[1:] != flat[:-1]) + 1
    bounds = np.concatenate([[0], changes, [flat.size]])
    runs = np.diff(bounds)
    if flat.size and flat[0]:
        runs = np.concatenate([[0], runs])
    return zlib.compress(runs.astype("<u4").tobytes(), 9)


def decode_mask_rle(data: bytes, width: int, height: int) -> BinaryMask:
    """
    Rebuild a mask from its run lengths.

    Raises:
        CorruptContainer: If the data does not decompress or the runs do not
            cover exactly width x height pixels
    """
    try:
        raw = zlib.decompress(data)
    except zlib.error as exc:
        raise CorruptContainer(f"Mask run lengths do not decompress: {exc}") from exc
    if len(raw) % 4:
        raise CorruptContainer("Mask run-length data is not a whole number of uint32")
    runs = np.frombuffer(raw, dtype="<u4").astype(np.int64)
    if int(runs.sum()) != width * height:
        raise CorruptContainer(
            f"Mask runs cover {int(runs.sum())} pixels, expected {width * height}"
        )
    values = np.arange(runs.size) % 2 == 1
    return BinaryMask(np.repeat(values, runs).reshape(height, width))


# ============================================================================
# Encode / decode
# ============================================================================


def _check_inputs(frames: Sequence[Frame], masks: Sequence[BinaryMask]) -> List[BinaryMask]:
    if not frames:
        raise EmptySequence("Cannot encode an empty sequence")
    if len(masks) == len(frames):
        masks = list(masks[1:])
    elif len(masks) != len(frames) - 1:
        raise DimensionMismatch(
            f"{len(frames)} frames need {len(frames) - 1} or {len(frames)} masks, got {len(masks)}"
        )
    first = frames[0]
    for frame in frames:
        if frame.shape != first.shape or frame.channels != first.channels:
            raise DimensionMismatch(
                f"Frame {frame.index} is {frame.width}x{frame.height}x{frame.channels}, "
                f"expected {first.width}x{first.height}x{first.channels}"
            )
    for frame, mask in zip(frames[1:], masks):
        if mask.shape != frame.shape:
            raise DimensionMismatch(
                f"Mask for frame {frame.index} is {mask.width}x{mask.height}, "
                f"expected {frame.width}x{frame.height}"
            )
    indices = [frame.index for frame in frames]
    if any(b <= a for a, b in zip(indices, indices[1:])):
        raise ValueError(f"Frame indices must be strictly increasing, got {indices}")
    return list(masks)


def encode_abstract_frame(frame: Frame, mask: BinaryMask, quality: int) -> AbstractFrame:
    """Zero the background of ``frame`` outside ``mask`` and compress it."""
    pixels = frame_to_uint8(frame) * mask.bits[:, :, np.newaxis].astype(np.uint8)
    if quality == LOSSLESS_QUALITY:
        image = encode_image(pixels, ".png")
    else:
        image = encode_image(pixels, ".jpg", quality)
    return AbstractFrame(frame_index=frame.index, image=image, mask_rle=encode_mask_rle(mask))


def encode(
    frames: Sequence[Frame],
    masks: Sequence[BinaryMask],
    quality: int = DEFAULT_QUALITY,
    jobs: int = 1,
) -> SemanticContainer:
    """
    Encode a sequence as one lossless base frame plus masked abstract frames.

    Args:
        frames: Frames in increasing index order, all the same size
        masks: One ROI mask per frame after the first; a mask for the first
            frame may be included and is ignored
        quality: JPEG quality 1..100 for the abstract frames; 100 stores them
            as lossless PNG
        jobs: Worker threads for the abstract frames

    Returns:
        SemanticContainer

    Raises:
        EmptySequence: If there are no frames
        DimensionMismatch: If sizes or counts disagree
        ValueError: If quality is outside 1..100

    Example:
        >>> container = encode(frames, moving_masks, quality=75)
        >>> len(container.abstract_frames) == len(frames) - 1
        True
    """
    if not 1 <= quality <= 100:
        raise ValueError(f"Quality must be in 1..100, got {quality}")
    masks = _check_inputs(frames, masks)
    base = frames[0]

    def work(i: int) -> AbstractFrame:
        return encode_abstract_frame(frames[i + 1], masks[i], quality)

    if jobs > 1 and masks:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            abstract = list(pool.map(work, range(len(masks))))
    else:
        abstract = [work(i) for i in range(len(masks))]

    header = ContainerHeader(
        version=CONTAINER_VERSION,
        frame_count=len(frames),
        width=base.width,
        height=base.height,
        channels=base.channels,
        quality=quality,
    )
    container = SemanticContainer(
        header=header,
        base_index=base.index,
        base_frame=encode_image(frame_to_uint8(base), ".png"),
        abstract_frames=tuple(abstract),
    )
    logger.info(
        f"Encoded {len(frames)} frames ({base.width}x{base.height}, quality {quality}) "
        f"into {len(serialize(container))} bytes"
    )
    return container


def _decode_pixels(data: bytes, header: ContainerHeader, what: str) -> np.ndarray:
    try:
        pixels = decode_image(data)
    except UnreadableImage as exc:
        raise CorruptContainer(f"{what} does not decode: {exc}") from exc
    if pixels.ndim == 2:
        pixels = pixels[:, :, np.newaxis]
    if pixels.shape != (header.height, header.width, header.channels):
        raise CorruptContainer(
            f"{what} is {pixels.shape}, header says "
            f"{(header.height, header.width, header.channels)}"
        )
    return pixels


def _check_image_format(entry: AbstractFrame, header: ContainerHeader) -> None:
    """Abstract frames are PNG in a lossless container and JPEG otherwise."""
    kind, signature = ("PNG", _PNG_SIGNATURE) if header.lossless else ("JPEG", _JPEG_SIGNATURE)
    if not entry.image.startswith(signature):
        raise CorruptContainer(
            f"Abstract frame {entry.frame_index} is not {kind} as quality {header.quality} requires"
        )


def decode(container: SemanticContainer, composite: bool = True) -> List[Frame]:
    """
    Reconstruct frames from a container.

    Args:
        container: Encoded sequence
        composite: Paste each abstract frame's ROI onto the base frame. When
            false, abstract frames are returned as they are (map-overlay mode).

    Returns:
        Base frame followed by one frame per abstract frame, in index order

    Raises:
        CorruptContainer: If an embedded image or mask does not decode, or an
            abstract frame is not the format the header quality implies
    """
    header = container.header
    base = _decode_pixels(container.base_frame, header, "Base frame")
    frames = [Frame(base.astype(np.float64) / 255.0, index=container.base_index)]
    for entry in container.abstract_frames:
        _check_image_format(entry, header)
        pixels = _decode_pixels(entry.image, header, f"Abstract frame {entry.frame_index}")
        if composite:
            roi = decode_mask_rle(entry.mask_rle, header.width, header.height).bits
            out = base.copy()
            out[roi] = pixels[roi]
            pixels = out
        frames.append(Frame(pixels.astype(np.float64) / 255.0, index=entry.frame_index))
    return frames


# ============================================================================
# Serialization
# ============================================================================


def serialize(container: SemanticContainer) -> bytes:
    """Deterministic byte encoding of a container."""
    header = container.header
    parts = [
        _HEADER.pack(
            CONTAINER_MAGIC,
            header.version,
            header.frame_count,
            header.width,
            header.height,
            header.channels,
            header.quality,
        ),
        _BASE.pack(container.base_index, len(container.base_frame)),
        container.base_frame,
    ]
    for entry in container.abstract_frames:
        parts.append(_ABSTRACT.pack(entry.frame_index, len(entry.image), len(entry.mask_rle)))
        parts.append(entry.image)
        parts.append(entry.mask_rle)
    return b"".join(parts)


class _Reader:
    """Bounds-checked cursor over container bytes."""

    def __init__(self, data: bytes):
        self.data = data
        self.offset = 0

    def take(self, n: int, what: str) -> bytes:
        end = self.offset + n
        if end > len(self.data):
            raise CorruptContainer(
                f"Truncated container: {what} needs {n} bytes at offset {self.offset}, "
                f"{len(self.data) - self.offset} left"
            )
        chunk = self.data[self.offset : end]
        self.offset = end
        return chunk

    def unpack(self, layout: struct.Struct, what: str) -> tuple:
        return layout.unpack(self.take(layout.size, what))


def parse(data: bytes) -> SemanticContainer:
    """
    Parse container bytes.

    Raises:
        CorruptContainer: On a bad magic, unknown version, impossible header,
            truncated or trailing data, or non-increasing frame indices
    """
    reader = _Reader(bytes(data))
    magic, version, frame_count, width, height, channels, quality = reader.unpack(
        _HEADER, "header"
    )
    if magic != CONTAINER_MAGIC:
        raise CorruptContainer(f"Bad magic {magic!r}, expected {CONTAINER_MAGIC!r}")
    if version != CONTAINER_VERSION:
        raise CorruptContainer(f"Unsupported container version {version}")
    if frame_count < 1 or width < 1 or height < 1:
        raise CorruptContainer(f"Impossible header: {frame_count} frames of {width}x{height}")
    if channels not in (1, 3) or not 1 <= quality <= 100:
        raise CorruptContainer(f"Impossible header: {channels} channels, quality {quality}")
    header = ContainerHeader(version, frame_count, width, height, channels, quality)

    base_index, base_length = reader.unpack(_BASE, "base frame header")
    base_frame = reader.take(base_length, "base frame")

    abstract = []
    last_index = base_index
    for _ in range(frame_count - 1):
        index, image_length, mask_length = reader.unpack(_ABSTRACT, "abstract frame header")
        if index <= last_index:
            raise CorruptContainer(f"Frame index {index} does not follow {last_index}")
        image = reader.take(image_length, f"abstract frame {index}")
        mask_rle = reader.take(mask_length, f"mask of frame {index}")
        abstract.append(AbstractFrame(frame_index=index, image=image, mask_rle=mask_rle))
        last_index = index
    if reader.offset != len(reader.data):
        trailing = len(reader.data) - reader.offset
        raise CorruptContainer(f"{trailing} trailing bytes after the last frame")
    return SemanticContainer(header, base_index, base_frame, tuple(abstract))


def write_container(container: SemanticContainer, path: PathLike) -> Path:
    """Write a container to a ``.svc`` file."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(serialize(container))
    return path


def read_container(path: PathLike) -> SemanticContainer:
    """
    Read a ``.svc`` file.

    Raises:
        CorruptContainer: If the file is missing or its bytes are invalid
    """
    path = Path(path)
    if not path.is_file():
        raise CorruptContainer(f"Container file not found: {path}")
    return parse(path.read_bytes())

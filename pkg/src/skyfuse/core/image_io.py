"""
Image file I/O for frames, masks and trace fields.

Frames are stored as 8-bit PNG/JPEG and held in memory as [0, 1] floats.
Trace fields are written as 16-bit PNGs with a sidecar text file holding the
linear scale factor (``<name>.scale.txt``).
"""

import logging
from pathlib import Path
from typing import Dict, Union

import cv2
import numpy as np

from .errors import UnreadableImage, UnsupportedBitDepth
from .models import BinaryMask, Frame

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

# Rec. 601 luma weights
LUMA_WEIGHTS = np.array([0.299, 0.587, 0.114])


def frame_to_uint8(frame: Frame) -> np.ndarray:
    """Quantize to 8-bit, keeping RGB channel order and shape (H, W, C)."""
    return np.rint(frame.data * 255.0).astype(np.uint8)


def frame_from_uint8(pixels: np.ndarray, index: int = 0) -> Frame:
    """Build a Frame from an 8-bit RGB or gray array."""
    if pixels.dtype != np.uint8:
        raise UnsupportedBitDepth(f"Expected 8-bit pixels, got {pixels.dtype}")
    return Frame(pixels.astype(np.float64) / 255.0, index=index)


def _to_cv(pixels: np.ndarray) -> np.ndarray:
    if pixels.ndim == 3 and pixels.shape[2] == 3:
        return cv2.cvtColor(pixels, cv2.COLOR_RGB2BGR)
    if pixels.ndim == 3:
        return pixels[:, :, 0]
    return pixels


def _from_cv(pixels: np.ndarray) -> np.ndarray:
    if pixels.ndim == 3 and pixels.shape[2] == 3:
        return cv2.cvtColor(pixels, cv2.COLOR_BGR2RGB)
    if pixels.ndim == 3 and pixels.shape[2] == 4:
        logger.warning("Dropping alpha channel from 4-channel image")
        return cv2.cvtColor(pixels, cv2.COLOR_BGRA2RGB)
    if pixels.ndim == 3 and pixels.shape[2] == 2:
        logger.warning("Dropping alpha channel from gray+alpha image")
        return pixels[:, :, 0]
    if pixels.ndim == 3 and pixels.shape[2] != 1:
        raise UnreadableImage(f"Unsupported channel count {pixels.shape[2]}")
    return pixels


def encode_image(pixels: np.ndarray, ext: str = ".png", quality: int = 95) -> bytes:
    """Encode an RGB/gray uint8 array in memory (``.png`` or ``.jpg``)."""
    params = [cv2.IMWRITE_JPEG_QUALITY, int(quality)] if ext == ".jpg" else []
    ok, buffer = cv2.imencode(ext, _to_cv(pixels), params)
    if not ok:
        raise UnreadableImage(f"Failed to encode image as {ext}")
    return buffer.tobytes()


def decode_image(data: bytes) -> np.ndarray:
    """Decode PNG/JPEG bytes to an RGB (H, W, 3) or gray (H, W) uint8 array."""
    pixels = cv2.imdecode(np.frombuffer(data, dtype=np.uint8), cv2.IMREAD_UNCHANGED)
    if pixels is None:
        raise UnreadableImage("Image bytes could not be decoded")
    return _from_cv(pixels)


def load_frame(path: PathLike, index: int = 0) -> Frame:
    """
    Load an 8-bit gray or RGB image as a Frame with intensities in [0, 1].

    Args:
        path: PNG or JPEG file
        index: Frame index to attach

    Returns:
        Frame with the file's channel count

    Raises:
        UnreadableImage: If the file is missing, not decodable, or has a channel
            count other than gray, gray+alpha, RGB or RGBA
        UnsupportedBitDepth: If the image is not 8 bits per channel
    """
    path = Path(path)
    if not path.is_file():
        raise UnreadableImage(f"Image file not found: {path}")
    pixels = cv2.imread(str(path), cv2.IMREAD_UNCHANGED)
    if pixels is None:
        raise UnreadableImage(f"Cannot decode image: {path}")
    if pixels.dtype != np.uint8:
        raise UnsupportedBitDepth(f"{path} is {pixels.dtype}, only 8-bit images are supported")
    try:
        pixels = _from_cv(pixels)
    except UnreadableImage as exc:
        raise UnreadableImage(f"{path}: {exc}") from exc
    return frame_from_uint8(pixels, index=index)


def save_frame(frame: Frame, path: PathLike) -> Path:
    """Write a frame as a lossless 8-bit PNG."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_image(frame_to_uint8(frame), ".png"))
    return path


def save_mask(mask: BinaryMask, path: PathLike) -> Path:
    """Write a mask as an 8-bit PNG with values {0, 255}."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_image(mask.bits.astype(np.uint8) * 255, ".png"))
    return path


def load_mask(path: PathLike) -> BinaryMask:
    """Read a {0, 255} mask PNG; any nonzero pixel is true."""
    path = Path(path)
    if not path.is_file():
        raise UnreadableImage(f"Mask file not found: {path}")
    pixels = cv2.imread(str(path), cv2.IMREAD_GRAYSCALE)
    if pixels is None:
        raise UnreadableImage(f"Cannot decode mask: {path}")
    return BinaryMask(pixels > 0)


def trace_scale_path(path: PathLike) -> Path:
    """Sidecar file holding the scale of trace image ``path``."""
    path = Path(path)
    return path.with_name(path.stem + ".scale.txt")


def save_trace(values: np.ndarray, path: PathLike) -> Path:
    """
    Write a nonnegative trace field as a 16-bit PNG plus a scale sidecar.

    Stored value ``q`` decodes to ``q * scale``; the scale maps the field
    maximum to 65535 (scale 0 for an all-zero field).
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    values = np.asarray(values, dtype=np.float64)
    peak = float(values.max()) if values.size else 0.0
    scale = peak / 65535.0 if peak > 0 else 0.0
    quantized = np.zeros(values.shape, dtype=np.uint16)
    if scale > 0:
        quantized = np.clip(np.rint(values / scale), 0, 65535).astype(np.uint16)
    if not cv2.imwrite(str(path), quantized):
        raise UnreadableImage(f"Failed to write trace image: {path}")
    trace_scale_path(path).write_text(f"{scale!r}\n")
    return path


def load_trace(path: PathLike) -> np.ndarray:
    """Read a 16-bit trace PNG and its sidecar back to real values."""
    path = Path(path)
    pixels = cv2.imread(str(path), cv2.IMREAD_UNCHANGED)
    if pixels is None:
        raise UnreadableImage(f"Cannot decode trace image: {path}")
    if pixels.dtype != np.uint16:
        raise UnsupportedBitDepth(f"Trace image {path} must be 16-bit, got {pixels.dtype}")
    scale = float(trace_scale_path(path).read_text().strip())
    return pixels.astype(np.float64) * scale


def luminance(frame: Frame) -> Frame:
    """Single-channel Rec. 601 luma of an RGB frame (gray frames pass through)."""
    if frame.channels == 1:
        return frame
    return frame.with_data(frame.data @ LUMA_WEIGHTS)


FRAME_PATTERN = "frame_{:04d}.png"


def frame_filename(index: int) -> str:
    """File name of frame ``index`` inside a sequence directory."""
    return FRAME_PATTERN.format(index)


def frame_index_from_name(path: PathLike) -> int:
    """
    Recover the frame index from a sequence file name.

    The index is the trailing integer of the stem, so both ``frame_0007.png``
    and ``0007.jpg`` give 7.

    Raises:
        UnreadableImage: If the stem does not end in digits
    """
    stem = Path(path).stem
    digits = len(stem) - len(stem.rstrip("0123456789"))
    if digits == 0:
        raise UnreadableImage(f"No frame index in file name: {path}")
    return int(stem[-digits:])


def list_sequence(directory: PathLike, suffixes=(".png", ".jpg", ".jpeg")) -> Dict[int, Path]:
    """
    Index the image files of a sequence directory by frame number.

    Raises:
        UnreadableImage: If the directory is missing or two files share an index
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise UnreadableImage(f"Sequence directory not found: {directory}")
    files: Dict[int, Path] = {}
    for path in sorted(directory.iterdir()):
        if path.suffix.lower() not in suffixes:
            continue
        index = frame_index_from_name(path)
        if index in files:
            raise UnreadableImage(f"{path.name} and {files[index].name} share frame index {index}")
        files[index] = path
    return dict(sorted(files.items()))

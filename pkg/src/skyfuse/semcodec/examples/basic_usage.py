"""
Basic usage examples for the semantic codec.

Run with: python -m skyfuse.semcodec.examples.basic_usage
"""

import tempfile
from pathlib import Path

import numpy as np

from skyfuse.core import BinaryMask, Frame
from skyfuse.semcodec import (
    compare_methods,
    compression_report,
    decode,
    encode,
    lossless_reference_bytes,
    raw_reference_bytes,
    read_container,
    render_text,
    report_table,
    write_container,
)

SIZE = 128


def scene(count: int = 12):
    """Smooth static background with a car driving across it, and its ROI masks."""
    rows, cols = np.mgrid[0:SIZE, 0:SIZE] / SIZE
    background = np.stack([0.3 + 0.2 * rows, 0.4 + 0.1 * cols, 0.35 + 0.1 * rows * cols], axis=2)
    frames, masks = [], []
    for i in range(count):
        data = background.copy()
        left = 10 + 6 * i
        data[60:70, left : left + 16] = (0.9, 0.75, 0.1)
        frames.append(Frame(data, index=i))
        bits = np.zeros((SIZE, SIZE), dtype=bool)
        bits[58:72, left - 2 : left + 18] = True
        masks.append(BinaryMask(bits))
    return frames, masks[1:]


def example_encode_decode() -> None:
    """Example 1: Encode, write, read and decode."""
    print("\n" + "=" * 70)
    print("Example 1: Container Round Trip")
    print("=" * 70)

    frames, masks = scene()
    container = encode(frames, masks, quality=75)
    with tempfile.TemporaryDirectory() as tmp:
        path = write_container(container, Path(tmp) / "semantic.svc")
        print(f"\n{path.name}: {path.stat().st_size} bytes for {len(frames)} frames")
        container = read_container(path)

    decoded = decode(container)
    outside = ~masks[-1].bits
    error = np.abs(decoded[-1].data[outside] - decoded[0].data[outside]).max()
    print(f"Header quality {container.header.quality}, lossless: {container.header.lossless}")
    print(f"Largest non-ROI difference from the base frame: {error}")

    overlay = decode(container, composite=False)
    lit = int((overlay[-1].data > 0).any(axis=2).sum())
    print(f"Map-overlay frame {overlay[-1].index}: {lit} nonzero px")


def example_report() -> None:
    """Example 2: Compression ratios."""
    print("\n" + "=" * 70)
    print("Example 2: Compression Report")
    print("=" * 70)

    frames, masks = scene()
    report = compression_report(
        encode(frames, masks),
        lossless_reference_bytes(frames),
        raw_reference_bytes(frames),
        label="Moving vehicles",
    )
    print(
        f"\nBase {report.base_bytes} B, abstract {report.abstract_bytes} B, "
        f"masks {report.mask_bytes} B"
    )
    print(f"SCR {report.scr:.1f}:1, map overlay {report.map_overlay_ratio:.1f}:1")


def example_compare() -> None:
    """Example 3: Tight ROIs against whole frames."""
    print("\n" + "=" * 70)
    print("Example 3: Comparing ROI Sources")
    print("=" * 70)

    frames, masks = scene()
    whole = [BinaryMask(np.ones((SIZE, SIZE), dtype=bool))] * len(masks)
    reports = compare_methods(frames, {"Moving vehicles": masks, "Whole frame": whole})
    print(render_text(report_table(reports)))


if __name__ == "__main__":
    print("\n" + "=" * 70)
    print("skyfuse semcodec - Usage Examples")
    print("=" * 70)

    example_encode_decode()
    example_report()
    example_compare()

    print("\n" + "=" * 70)
    print("Examples complete!")
    print("=" * 70 + "\n")

"""
Basic usage examples for flux-tensor motion detection.

Run with: python -m skyfuse.fluxtensor.examples.basic_usage
"""

import numpy as np

from skyfuse.core import Frame, SequenceConfig, ThresholdMode
from skyfuse.fluxtensor import (
    color_flux_trace,
    compute_derivatives,
    motion_masks,
    structure_tensor_trace,
    threshold_trace,
)


def moving_square(count: int = 9, size: int = 64, step: int = 2):
    """A bright square crossing a textured, static background."""
    rng = np.random.default_rng(0)
    background = 0.3 + 0.2 * rng.random((size, size, 3))
    frames = []
    for i in range(count):
        data = background.copy()
        data[24:34, 8 + step * i : 18 + step * i] = (0.9, 0.8, 0.2)
        frames.append(Frame(data, index=i))
    return frames


def example_traces() -> None:
    """Example 1: Flux against structure trace on one window."""
    print("\n" + "=" * 70)
    print("Example 1: Trace Fields")
    print("=" * 70)

    config = SequenceConfig()
    frames = moving_square()
    stack = compute_derivatives(frames[:5], config)
    flux = color_flux_trace(stack, config)
    structure = structure_tensor_trace(stack, config)
    corner = (slice(50, 64), slice(50, 64))
    print(f"\nCenter frame: {stack.frame_index}")
    print(f"Flux peak: {flux.peak():.4f}, on the static corner: {flux.values[corner].max():.2e}")
    print(f"Structure trace on the static corner: {structure.values[corner].max():.4f}")


def example_thresholds() -> None:
    """Example 2: The four threshold rules."""
    print("\n" + "=" * 70)
    print("Example 2: Threshold Rules")
    print("=" * 70)

    config = SequenceConfig()
    flux = color_flux_trace(compute_derivatives(moving_square()[:5], config), config)
    for text in ("fixed:0.01", "percentile:97", "relative:0.1", "otsu"):
        result = threshold_trace(flux, ThresholdMode.parse(text))
        print(f"  {text:<14} threshold {result.threshold:.4f}, {result.mask.count()} px")


def example_sequence() -> None:
    """Example 3: Motion masks for every interior frame."""
    print("\n" + "=" * 70)
    print("Example 3: Sliding Window")
    print("=" * 70)

    config = SequenceConfig(trace_threshold_mode=ThresholdMode.parse("relative:0.1"))
    results = motion_masks(moving_square(), config, jobs=2)
    print(f"\n{len(results)} interior frames")
    for result in results:
        _, cols = np.nonzero(result.mask.bits)
        print(
            f"  Frame {result.frame_index}: {result.mask.count()} px, "
            f"mean column {cols.mean():.1f}"
        )


if __name__ == "__main__":
    print("\n" + "=" * 70)
    print("skyfuse fluxtensor - Usage Examples")
    print("=" * 70)

    example_traces()
    example_thresholds()
    example_sequence()

    print("\n" + "=" * 70)
    print("Examples complete!")
    print("=" * 70 + "\n")

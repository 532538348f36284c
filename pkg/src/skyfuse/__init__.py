"""
skyfuse: moving-vehicle detection and semantic compression for aerial video

Stabilizes georegistered frames onto the ground plane, finds moving pixels
with the color flux tensor, fuses them with vehicle detections to separate
vehicles from building parallax, and encodes only the moving vehicles over
one base frame.
"""

__version__ = "0.1.0"

from .core.errors import SkyfuseError
from .pipeline import PipelineConfig, PipelineRunner, StageError, run_pipeline
from .synth import SceneSpec, render_sequence

__all__ = [
    "SkyfuseError",
    "PipelineConfig",
    "PipelineRunner",
    "StageError",
    "run_pipeline",
    "SceneSpec",
    "render_sequence",
]

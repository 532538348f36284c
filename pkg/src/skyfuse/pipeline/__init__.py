"""
End-to-end orchestration for skyfuse.

Runs georegistration, flux-tensor motion detection, appearance ingest,
fusion, semantic encoding and evaluation in that order, passing data between
stages through files in one output directory.

Example:
    >>> from skyfuse.pipeline import PipelineConfig, run_pipeline
    >>> manifest = run_pipeline(PipelineConfig.from_yaml("run.yaml"))
    >>> manifest.total_bytes > 0
    True
"""

from .models import (
    STAGES,
    STAGE_NAMES,
    STAGE_MODULES,
    InvalidConfig,
    StageError,
    AppearanceSettings,
    FusionSettings,
    CodecSettings,
    EvaluationSettings,
    PipelineConfig,
    Artifact,
    RunManifest,
)
from .stages import (
    run_stabilize,
    run_flux,
    run_ingest,
    run_fuse,
    run_encode,
    run_eval,
)
from .runner import MANIFEST_FILE, PARTIAL_SUFFIX, PipelineRunner, run_pipeline

__all__ = [
    "STAGES",
    "STAGE_NAMES",
    "STAGE_MODULES",
    "InvalidConfig",
    "StageError",
    "AppearanceSettings",
    "FusionSettings",
    "CodecSettings",
    "EvaluationSettings",
    "PipelineConfig",
    "Artifact",
    "RunManifest",
    "run_stabilize",
    "run_flux",
    "run_ingest",
    "run_fuse",
    "run_encode",
    "run_eval",
    "MANIFEST_FILE",
    "PARTIAL_SUFFIX",
    "PipelineRunner",
    "run_pipeline",
]

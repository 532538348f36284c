"""
Configuration and run records of the end-to-end pipeline.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, field_validator

from ..appearance.detection_io import DEFAULT_MIN_CONFIDENCE, DEFAULT_VEHICLE_CLASSES
from ..core.errors import SkyfuseError
from ..core.models import SequenceConfig
from ..evaluation.models import MatchConfig
from ..fusion.buildings import DEFAULT_IOU_LINK
from ..fusion.fuse import DEFAULT_OVERLAP_FRACTION
from ..fusion.models import FusionMethod
from ..georeg.models import PlaneConfig
from ..semcodec.models import DEFAULT_QUALITY

# stage name, module doing the work
STAGES: Tuple[Tuple[str, str], ...] = (
    ("stabilize", "georeg"),
    ("flux", "fluxtensor"),
    ("ingest", "appearance"),
    ("fuse", "fusion"),
    ("encode", "semcodec"),
    ("eval", "evaluation"),
)
STAGE_NAMES: Tuple[str, ...] = tuple(name for name, _ in STAGES)
STAGE_MODULES: Dict[str, str] = dict(STAGES)

# resolved against the config file directory when relative
PATH_FIELDS = ("frames_dir", "poses_file", "detections_file", "ground_truth_file", "output_dir")


class InvalidConfig(SkyfuseError):
    """Raised when a pipeline config file cannot be loaded."""

    pass


class StageError(SkyfuseError):
    """A pipeline stage failed; carries the stage name and the original error."""

    def __init__(self, stage: str, cause: BaseException):
        self.stage = stage
        self.module = STAGE_MODULES.get(stage, stage)
        self.cause = cause
        super().__init__(f"{stage} stage ({self.module}) failed: {type(cause).__name__}: {cause}")


class _Section(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class AppearanceSettings(_Section):
    """Which detector output counts as a vehicle, and in which coordinates it arrives."""

    vehicle_classes: List[str] = Field(
        default_factory=lambda: sorted(DEFAULT_VEHICLE_CLASSES),
        description="Detector classes merged into the vehicle class",
    )
    min_confidence: float = Field(
        default=DEFAULT_MIN_CONFIDENCE, ge=0.0, le=1.0, description="Lowest detector score kept"
    )
    image_coordinates: bool = Field(
        default=False, description="Boxes are raw-frame pixels and must be warped onto the plane"
    )


class FusionSettings(_Section):
    method: FusionMethod = Field(
        default=FusionMethod.MOTION_APPEARANCE_BUILDING, description="Detector variant to run"
    )
    overlap_fraction: float = Field(
        default=DEFAULT_OVERLAP_FRACTION, gt=0.0, le=1.0, description="Appearance overlap for A=1"
    )
    iou_link: float = Field(
        default=DEFAULT_IOU_LINK, gt=0.0, le=1.0, description="Building aggregation IoU link"
    )
    overlays: bool = Field(default=True, description="Write category overlays")


class CodecSettings(_Section):
    quality: int = Field(
        default=DEFAULT_QUALITY, ge=1, le=100, description="Abstract-frame JPEG quality"
    )


class EvaluationSettings(_Section):
    criterion: str = Field(default="iou:0.3", description="iou[:threshold] or centroid")
    optimal: bool = Field(default=False, description="Maximum-cardinality matching")
    methods: List[FusionMethod] = Field(
        default_factory=lambda: list(FusionMethod), description="Rows of the method ladder"
    )

    @field_validator("criterion")
    @classmethod
    def validate_criterion(cls, v: str) -> str:
        MatchConfig.parse(v)
        return v

    def match_config(self) -> MatchConfig:
        parsed = MatchConfig.parse(self.criterion)
        return parsed.model_copy(update={"optimal": self.optimal})


class PipelineConfig(BaseModel):
    """
    Inputs, outputs and every module's settings for one pipeline run.

    Relative paths in a config file are resolved against the file's directory.

    Example:
        >>> config = PipelineConfig.from_yaml("run.yaml").with_overrides({"jobs": 4})
        >>> config.sequence.temporal_window
        5
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    frames_dir: Path = Field(..., description="Raw frames, one image per frame index")
    poses_file: Path = Field(..., description="Pose CSV")
    detections_file: Optional[Path] = Field(default=None, description="Appearance detections")
    ground_truth_file: Optional[Path] = Field(default=None, description="GT boxes on the plane")
    output_dir: Path = Field(default=Path("skyfuse_out"), description="Work directory")
    plane: PlaneConfig = Field(..., description="Stabilized plane raster")
    sequence: SequenceConfig = Field(default_factory=SequenceConfig)
    appearance: AppearanceSettings = Field(default_factory=AppearanceSettings)
    fusion: FusionSettings = Field(default_factory=FusionSettings)
    codec: CodecSettings = Field(default_factory=CodecSettings)
    evaluation: EvaluationSettings = Field(default_factory=EvaluationSettings)
    jobs: int = Field(default=1, ge=1, description="Worker threads per stage")

    @classmethod
    def from_yaml(cls, path: Union[str, Path]) -> "PipelineConfig":
        """
        Load a config file.

        Raises:
            InvalidConfig: If the file is missing, not YAML or not a mapping
            ValidationError: If a value is out of range
        """
        path = Path(path)
        if not path.is_file():
            raise InvalidConfig(f"Config file not found: {path}")
        try:
            data = yaml.safe_load(path.read_text())
        except yaml.YAMLError as e:
            raise InvalidConfig(f"{path} is not valid YAML: {e}") from e
        if not isinstance(data, dict):
            raise InvalidConfig(f"{path} must hold a mapping of settings")
        base = path.resolve().parent
        for key in PATH_FIELDS:
            if data.get(key) is not None and not Path(data[key]).is_absolute():
                data[key] = str(base / data[key])
        return cls.model_validate(data)

    def to_yaml(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        data = self.model_dump(mode="json", exclude_none=True)
        path.write_text(yaml.safe_dump(data, sort_keys=True))
        return path

    def with_overrides(self, overrides: Mapping[str, Any]) -> "PipelineConfig":
        """
        A copy with dotted-key settings replaced, validated again.

        None values are skipped, so unset CLI flags leave the file's value.

        Example:
            >>> config.with_overrides({"jobs": 4, "sequence.temporal_window": 7})
        """
        data = self.model_dump()
        for key, value in overrides.items():
            if value is None:
                continue
            *parents, leaf = key.split(".")
            node = data
            for part in parents:
                if not isinstance(node.get(part), dict):
                    raise KeyError(f"Unknown config section '{part}' in '{key}'")
                node = node[part]
            if leaf not in node:
                raise KeyError(f"Unknown config key '{key}'")
            node[leaf] = value
        return type(self).model_validate(data)


@dataclass(frozen=True)
class Artifact:
    """A file written by a stage, relative to the output directory."""

    path: str
    size: int


@dataclass
class RunManifest:
    """Artifacts per completed stage; serialized with sorted keys and no timestamps."""

    stages: Dict[str, List[Artifact]] = field(default_factory=dict)
    failed_stage: Optional[str] = None

    def as_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "stages": {
                name: [
                    {"path": a.path, "size": a.size}
                    for a in sorted(artifacts, key=lambda a: a.path)
                ]
                for name, artifacts in self.stages.items()
            }
        }
        if self.failed_stage is not None:
            data["failed_stage"] = self.failed_stage
        return data

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "RunManifest":
        stages = {
            name: [Artifact(str(entry["path"]), int(entry["size"])) for entry in artifacts]
            for name, artifacts in data.get("stages", {}).items()
        }
        return cls(stages=stages, failed_stage=data.get("failed_stage"))

    @property
    def total_bytes(self) -> int:
        return sum(a.size for artifacts in self.stages.values() for a in artifacts)

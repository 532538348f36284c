"""
Runs pipeline stages in order and records what they wrote.
"""

import json
import logging
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional

from .models import STAGE_MODULES, STAGE_NAMES, Artifact, PipelineConfig, RunManifest, StageError
from .stages import run_encode, run_eval, run_flux, run_fuse, run_ingest, run_stabilize

logger = logging.getLogger(__name__)

MANIFEST_FILE = "manifest.json"
PARTIAL_SUFFIX = ".partial"

StageFn = Callable[[PipelineConfig], List[Path]]


class PipelineRunner:
    """
    Executes stages in their fixed order: stabilize, flux, ingest, fuse, encode, eval.

    A failing stage leaves ``<stage>.partial`` in the output directory with the
    error text, keeps whatever it already wrote and stops the run.

    Example:
        >>> runner = PipelineRunner(PipelineConfig.from_yaml("run.yaml"))
        >>> manifest = runner.run()
        >>> sorted(manifest.stages)
        ['encode', 'eval', 'flux', 'fuse', 'ingest', 'stabilize']
    """

    def __init__(self, config: PipelineConfig, grayscale: bool = False):
        """
        Initialize the runner.

        Args:
            config: Validated pipeline configuration
            grayscale: Run the flux stage on luminance instead of color
        """
        self.config = config
        self.output_dir = Path(config.output_dir)
        self.stage_fns: Dict[str, StageFn] = {
            "stabilize": run_stabilize,
            "flux": lambda cfg: run_flux(cfg, grayscale=grayscale),
            "ingest": run_ingest,
            "fuse": run_fuse,
            "encode": run_encode,
            "eval": run_eval,
        }

    def run(self, stages: Optional[Iterable[str]] = None) -> RunManifest:
        """
        Run the requested stages (all of them by default) in pipeline order.

        Args:
            stages: Stage names to run; order of the argument does not matter

        Returns:
            RunManifest of the completed stages, also written to manifest.json

        Raises:
            StageError: If a stage fails; the manifest written so far names it
            ValueError: If a stage name is unknown
        """
        wanted = self._select(stages)
        self.output_dir.mkdir(parents=True, exist_ok=True)
        # a partial run updates the entries of an earlier one
        manifest = self.read_manifest() if stages is not None else RunManifest()
        manifest.failed_stage = None

        for name in wanted:
            marker = self.output_dir / f"{name}{PARTIAL_SUFFIX}"
            logger.info(f"Stage {name} ({STAGE_MODULES[name]})")
            try:
                written = self.stage_fns[name](self.config)
            except Exception as e:
                # keep what the stage wrote; the marker names the failure
                marker.write_text(f"{STAGE_MODULES[name]}: {type(e).__name__}: {e}\n")
                manifest.failed_stage = name
                self.write_manifest(manifest)
                logger.error(f"Stage {name} failed: {e}")
                raise StageError(name, e) from e

            # a completed stage supersedes an earlier failure
            marker.unlink(missing_ok=True)
            manifest.stages[name] = self._artifacts(written)
            logger.info(f"Stage {name} wrote {len(written)} files")

        self.write_manifest(manifest)
        return manifest

    def read_manifest(self) -> RunManifest:
        path = self.output_dir / MANIFEST_FILE
        if not path.is_file():
            return RunManifest()
        return RunManifest.from_dict(json.loads(path.read_text()))

    def write_manifest(self, manifest: RunManifest) -> Path:
        path = self.output_dir / MANIFEST_FILE
        path.write_text(json.dumps(manifest.as_dict(), indent=2, sort_keys=True) + "\n")
        return path

    def _select(self, stages: Optional[Iterable[str]]) -> List[str]:
        if stages is None:
            return list(STAGE_NAMES)
        requested = set(stages)
        unknown = requested - set(STAGE_NAMES)
        if unknown:
            raise ValueError(
                f"Unknown stage(s) {sorted(unknown)}; expected one of {', '.join(STAGE_NAMES)}"
            )
        return [name for name in STAGE_NAMES if name in requested]

    def _artifacts(self, written: Iterable[Path]) -> List[Artifact]:
        artifacts = []
        for path in sorted(set(Path(p) for p in written)):
            artifacts.append(
                Artifact(path.relative_to(self.output_dir).as_posix(), path.stat().st_size)
            )
        return artifacts


def run_pipeline(
    config: PipelineConfig, stages: Optional[Iterable[str]] = None, grayscale: bool = False
) -> RunManifest:
    """Run the pipeline once; see PipelineRunner.run."""
    return PipelineRunner(config, grayscale=grayscale).run(stages)

"""
Temporal aggregation of roof-top detections.

Under an orbiting camera a building's roof drifts across the stabilized plane
by its parallax. Linking the per-frame roof boxes into tracks gives each
building one aggregated footprint, and the spread of a track's box centers
grows with the building's height.
"""

import csv
import logging
from pathlib import Path
from typing import Iterable, List, Sequence, Tuple, Union

from ..core.models import BBox
from .models import BuildingTrack

logger = logging.getLogger(__name__)

DEFAULT_IOU_LINK = 0.1
BUILDING_TRACK_HEADER = ["track_id", "frame_index", "x", "y", "w", "h"]


class BuildingAggregator:
    """
    Streaming greedy IoU chain-linker for roof-top boxes.

    Frames must be added in increasing order. Within a frame, boxes are taken
    in canonical order and each joins the not-yet-extended track whose last
    box has the highest IoU, provided it reaches ``iou_link``. Unmatched boxes
    start new tracks.

    Example:
        >>> agg = BuildingAggregator()
        >>> agg.add_frame(0, [BBox(10, 10, 20, 20)])
        >>> agg.add_frame(1, [BBox(12, 10, 20, 20)])
        >>> len(agg.tracks)
        1
    """

    def __init__(self, iou_link: float = DEFAULT_IOU_LINK):
        if not 0.0 < iou_link <= 1.0:
            raise ValueError(f"iou_link must be in (0, 1], got {iou_link}")
        self.iou_link = iou_link
        self.tracks: List[BuildingTrack] = []
        self._last_frame = -1

    def add_frame(self, frame_index: int, boxes: Iterable[BBox]) -> None:
        """Link one frame's roof-top boxes into the tracks."""
        if frame_index <= self._last_frame:
            raise ValueError(f"Frame {frame_index} added after frame {self._last_frame}")
        self._last_frame = frame_index
        extended = set()
        for box in sorted(boxes, key=BBox.sort_key):
            best, best_iou = None, 0.0
            for track in self.tracks:
                if track.track_id in extended:
                    continue
                iou = track.last_box.iou(box)
                if iou > best_iou:
                    best, best_iou = track, iou
            if best is not None and best_iou >= self.iou_link:
                best.boxes.append(box)
                extended.add(best.track_id)
            else:
                track = BuildingTrack(track_id=len(self.tracks), boxes=[box])
                self.tracks.append(track)
                extended.add(track.track_id)
                logger.debug(f"Frame {frame_index}: new building track {track.track_id}")

    def boxes_so_far(self) -> Tuple[BBox, ...]:
        """Hull box of every track; the roof-top filter's footprint set."""
        return tuple(track.hull() for track in self.tracks)


def aggregate_buildings(
    per_frame_buildings: Sequence[Tuple[int, Sequence[BBox]]],
    iou_link: float = DEFAULT_IOU_LINK,
) -> List[BuildingTrack]:
    """
    Chain-link per-frame roof-top boxes into building tracks.

    Args:
        per_frame_buildings: (frame_index, boxes) pairs in frame order
        iou_link: Smallest IoU with a track's last box that extends the track

    Returns:
        Tracks in creation order; ``track.spread()`` is the height proxy

    Raises:
        ValueError: If frames are not in increasing order
    """
    aggregator = BuildingAggregator(iou_link)
    for frame_index, boxes in per_frame_buildings:
        aggregator.add_frame(frame_index, boxes)
    logger.info(
        f"Aggregated roof-top detections from {len(per_frame_buildings)} frames "
        f"into {len(aggregator.tracks)} building tracks"
    )
    return aggregator.tracks


def write_building_tracks(tracks: Iterable[BuildingTrack], path: Union[str, Path]) -> Path:
    """Write one ``track_id,frame_index,x,y,w,h`` row per member box."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(BUILDING_TRACK_HEADER)
        for track in tracks:
            for box in track.boxes:
                coords = (repr(float(v)) for v in (box.x, box.y, box.w, box.h))
                writer.writerow([track.track_id, box.frame_index, *coords])
    return path

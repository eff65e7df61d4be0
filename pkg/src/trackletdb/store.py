"""Persistence of tracklet databases and indexed lookups over them.

The on-disk format is a single deterministic UTF-8 JSON document per video;
it is the interchange format read and written by the CLI and the service.
"""

from __future__ import annotations

import bisect
import json
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Any, BinaryIO, Union

from .errors import CorruptDatabase, InvalidArgument, NotFound, UnsupportedVersion
from .model import (
    AudioAnnotation,
    BoundingBox,
    MotionSegment,
    TrackletDatabase,
    TrackletRecord,
    TrajectoryPoint,
    VideoMeta,
)

FORMAT_VERSION = 1


def canonical_number(value: float | int) -> float | int:
    """Integral values serialize bare; other reals keep their minimal repr."""
    if isinstance(value, float) and value.is_integer():
        return int(value)
    return value


def _bbox_doc(bbox: BoundingBox) -> list[float | int]:
    return [canonical_number(v) for v in bbox.as_tuple()]


def database_to_document(db: TrackletDatabase) -> dict[str, Any]:
    """The canonical JSON-ready structure, with records ascending by id."""
    video = db.video
    return {
        "version": FORMAT_VERSION,
        "video": {
            "video_id": video.video_id,
            "path": video.path,
            "fps": canonical_number(video.fps),
            "width": video.width,
            "height": video.height,
            "num_frames": video.num_frames,
            "duration_s": canonical_number(video.duration_s),
        },
        "tracklets": [
            {
                "id": record.id,
                "category": record.category,
                "appearance": record.appearance,
                "motion": [
                    {
                        "start_s": canonical_number(seg.start_s),
                        "end_s": canonical_number(seg.end_s),
                        "caption": seg.caption,
                    }
                    for seg in record.motion
                ],
                "trajectory": [
                    {
                        "frame": point.frame_index,
                        "t": canonical_number(point.timestamp_s),
                        "bbox": _bbox_doc(point.bbox),
                    }
                    for point in record.trajectory
                ],
                "audio": None if record.audio is None else {
                    "category": record.audio.category,
                    "transcript": record.audio.transcript,
                    "emotion": record.audio.emotion,
                },
            }
            for record in sorted(db.records, key=lambda r: r.id)
        ],
    }


def dumps(db: TrackletDatabase) -> bytes:
    """Deterministic bytes: fixed key order, canonical numbers, compact separators."""
    doc = database_to_document(db)
    return json.dumps(doc, ensure_ascii=False, separators=(",", ":")).encode("utf-8") + b"\n"


def save(db: TrackletDatabase, destination: Union[str, Path, BinaryIO]) -> None:
    data = dumps(db)
    if hasattr(destination, "write"):
        destination.write(data)
    else:
        Path(destination).write_bytes(data)


def _expect(doc: Any, key: str, kinds: tuple[type, ...], where: str) -> Any:
    if not isinstance(doc, dict) or key not in doc:
        raise CorruptDatabase("document schema", f"missing {key!r} in {where}")
    value = doc[key]
    if kinds and not isinstance(value, kinds):
        raise CorruptDatabase("document schema", f"{where}.{key} has wrong type")
    if isinstance(value, bool) and bool not in kinds:
        raise CorruptDatabase("document schema", f"{where}.{key} has wrong type")
    return value


_NUM = (int, float)


def _load_bbox(doc: Any, where: str) -> BoundingBox:
    if (not isinstance(doc, list) or len(doc) != 4
            or not all(isinstance(v, _NUM) and not isinstance(v, bool) for v in doc)):
        raise CorruptDatabase("document schema", f"{where}.bbox must be four numbers")
    return BoundingBox(*doc)


def document_to_database(doc: Any) -> TrackletDatabase:
    if not isinstance(doc, dict):
        raise CorruptDatabase("document schema", "top level must be an object")
    version = doc.get("version")
    if version != FORMAT_VERSION:
        raise UnsupportedVersion(version)

    video_doc = _expect(doc, "video", (dict,), "document")
    try:
        video = VideoMeta(
            video_id=str(_expect(video_doc, "video_id", (), "video")),
            path=str(_expect(video_doc, "path", (), "video")),
            fps=_expect(video_doc, "fps", _NUM, "video"),
            width=_expect(video_doc, "width", (int,), "video"),
            height=_expect(video_doc, "height", (int,), "video"),
            num_frames=_expect(video_doc, "num_frames", (int,), "video"),
            duration_s=_expect(video_doc, "duration_s", _NUM, "video"),
        )
        records = []
        for index, rec_doc in enumerate(_expect(doc, "tracklets", (list,), "document")):
            where = f"tracklets[{index}]"
            motion = tuple(
                MotionSegment(
                    start_s=_expect(seg, "start_s", _NUM, where),
                    end_s=_expect(seg, "end_s", _NUM, where),
                    caption=str(_expect(seg, "caption", (str,), where)),
                )
                for seg in _expect(rec_doc, "motion", (list,), where))
            trajectory = tuple(
                TrajectoryPoint(
                    frame_index=_expect(point, "frame", (int,), where),
                    timestamp_s=_expect(point, "t", _NUM, where),
                    bbox=_load_bbox(_expect(point, "bbox", (list,), where), where),
                )
                for point in _expect(rec_doc, "trajectory", (list,), where))
            audio_doc = _expect(rec_doc, "audio", (dict, type(None)), where)
            audio = None if audio_doc is None else AudioAnnotation(
                category=str(_expect(audio_doc, "category", (str,), where)),
                transcript=_expect(audio_doc, "transcript", (str, type(None)), where),
                emotion=_expect(audio_doc, "emotion", (str, type(None)), where),
            )
            records.append(TrackletRecord(
                id=_expect(rec_doc, "id", (int,), where),
                category=str(_expect(rec_doc, "category", (str,), where)),
                appearance=str(_expect(rec_doc, "appearance", (str,), where)),
                motion=motion,
                trajectory=trajectory,
                audio=audio,
            ))
        return TrackletDatabase(video=video, records=tuple(records))
    except InvalidArgument as exc:
        raise CorruptDatabase(exc.invariant, str(exc)) from exc


def loads(data: bytes | str) -> TrackletDatabase:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise CorruptDatabase("document schema", f"invalid JSON: {exc.msg}") from exc
    return document_to_database(doc)


def load(source: Union[str, Path, BinaryIO]) -> TrackletDatabase:
    if hasattr(source, "read"):
        return loads(source.read())
    return loads(Path(source).read_bytes())


# --- lookup filters -------------------------------------------------------


@dataclass(frozen=True)
class AllRecords:
    pass


@dataclass(frozen=True)
class ByCategory:
    label: str


@dataclass(frozen=True)
class Overlapping:
    t1: float
    t2: float


@dataclass(frozen=True)
class ById:
    id: int


Filter = Union[AllRecords, ByCategory, Overlapping, ById]


class _Entry:
    """One registered database with its immutable lookup indexes."""

    def __init__(self, db: TrackletDatabase):
        self.db = db
        by_category: dict[str, list[int]] = {}
        intervals: list[tuple[float, float, int]] = []
        for record in db.records:
            by_category.setdefault(record.category, []).append(record.id)
            if record.trajectory:
                intervals.append((record.first_timestamp, record.last_timestamp, record.id))
        intervals.sort()
        self.by_category = {label: tuple(ids) for label, ids in by_category.items()}
        self.interval_starts = [item[0] for item in intervals]
        self.intervals = intervals
        self.by_id = {record.id: record for record in db.records}

    def overlapping_ids(self, t1: float, t2: float) -> list[int]:
        # The environment spans the whole video and matches every interval.
        ids = [rec_id for rec_id in self.by_id if not self.by_id[rec_id].trajectory]
        cut = bisect.bisect_right(self.interval_starts, t2)
        ids.extend(rec_id for first, last, rec_id in self.intervals[:cut] if last >= t1)
        return ids


class StoreHandle:
    """Registry of databases with category and time-interval access paths.

    Single writer, many readers: register swaps the registry atomically, so a
    concurrent reader sees either the old or the new database, never a mix.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._entries: dict[str, _Entry] = {}

    def register(self, db: TrackletDatabase) -> None:
        entry = _Entry(db)
        with self._lock:
            entries = dict(self._entries)
            entries[db.video.video_id] = entry
            self._entries = entries

    def video_ids(self) -> list[str]:
        return sorted(self._entries)

    def get(self, video_id: str) -> TrackletDatabase:
        return self._entry(video_id).db

    def __contains__(self, video_id: str) -> bool:
        return video_id in self._entries

    def lookup(self, video_id: str, flt: Filter = AllRecords()) -> list[TrackletRecord]:
        entry = self._entry(video_id)
        if isinstance(flt, AllRecords):
            ids = [record.id for record in entry.db.records]
        elif isinstance(flt, ByCategory):
            ids = list(entry.by_category.get(flt.label, ()))
        elif isinstance(flt, Overlapping):
            ids = entry.overlapping_ids(flt.t1, flt.t2)
        elif isinstance(flt, ById):
            ids = [flt.id] if flt.id in entry.by_id else []
        else:
            raise InvalidArgument(f"unknown filter {flt!r}")
        return [entry.by_id[rec_id] for rec_id in sorted(ids)]

    def _entry(self, video_id: str) -> _Entry:
        entry = self._entries.get(video_id)
        if entry is None:
            raise NotFound(f"video {video_id!r} is not registered")
        return entry

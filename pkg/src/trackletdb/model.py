"""Core domain types plus the pure scoring and text-rendering rules they share.

Every type is an immutable value validated at construction, and every function
is pure, so everything here is safe to use from concurrent contexts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Literal, Sequence

from .errors import InvalidArgument

ENVIRONMENT_ID = 0
ENVIRONMENT_CATEGORY = "environment"

# Relative slack for floating-point identities (timestamps, segment joints).
_REL_TOL = 1e-9


def _require(condition: bool, invariant: str, detail: str = "") -> None:
    if not condition:
        message = f"{invariant}: {detail}" if detail else invariant
        raise InvalidArgument(message, invariant=invariant)


@dataclass(frozen=True)
class VideoMeta:
    """Identity and geometry of one video; frames are referenced by index only."""

    video_id: str
    path: str
    fps: float
    width: int
    height: int
    num_frames: int
    duration_s: float

    def __post_init__(self):
        object.__setattr__(self, "fps", float(self.fps))
        object.__setattr__(self, "duration_s", float(self.duration_s))
        _require(self.fps > 0, "fps positive", f"fps={self.fps}")
        _require(self.width > 0 and self.height > 0, "frame size positive",
                 f"{self.width}x{self.height}")
        _require(self.num_frames >= 0, "frame count non-negative")
        _require(abs(self.num_frames - round(self.fps * self.duration_s)) <= 1,
                 "frame count matches duration",
                 f"num_frames={self.num_frames}, fps*duration={self.fps * self.duration_s}")


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned box in pixels; origin top-left, x right, y down."""

    x1: float
    y1: float
    x2: float
    y2: float

    def __post_init__(self):
        for name in ("x1", "y1", "x2", "y2"):
            object.__setattr__(self, name, float(getattr(self, name)))
        _require(0 <= self.x1 <= self.x2, "bbox ordered", f"x1={self.x1}, x2={self.x2}")
        _require(0 <= self.y1 <= self.y2, "bbox ordered", f"y1={self.y1}, y2={self.y2}")

    @property
    def center(self) -> tuple[float, float]:
        return ((self.x1 + self.x2) / 2.0, (self.y1 + self.y2) / 2.0)

    @property
    def area(self) -> float:
        return (self.x2 - self.x1) * (self.y2 - self.y1)

    def within(self, width: float, height: float) -> bool:
        return self.x2 <= width and self.y2 <= height

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.x1, self.y1, self.x2, self.y2)


@dataclass(frozen=True)
class TrajectoryPoint:
    """One observation of a tracklet: frame index, derived timestamp, box."""

    frame_index: int
    timestamp_s: float
    bbox: BoundingBox

    def __post_init__(self):
        object.__setattr__(self, "timestamp_s", float(self.timestamp_s))
        _require(self.frame_index >= 0, "frame index non-negative")
        _require(self.timestamp_s >= 0, "timestamp non-negative")


@dataclass(frozen=True)
class RegionRef:
    """A crop reference (video, frame, box) without materialized pixels."""

    video_id: str
    frame_index: int
    bbox: BoundingBox

    def __post_init__(self):
        _require(self.frame_index >= 0, "frame index non-negative")


@dataclass(frozen=True)
class MotionSegment:
    """A temporal window of a tracklet with one caption for its activity."""

    start_s: float
    end_s: float
    caption: str

    def __post_init__(self):
        object.__setattr__(self, "start_s", float(self.start_s))
        object.__setattr__(self, "end_s", float(self.end_s))
        _require(0 <= self.start_s < self.end_s, "motion segment ordered",
                 f"[{self.start_s}, {self.end_s})")


@dataclass(frozen=True)
class AudioAnnotation:
    """Audio class of the whole video, with optional transcript and emotion."""

    category: str
    transcript: str | None = None
    emotion: str | None = None


@dataclass(frozen=True)
class TrackletRecord:
    """One database row: a tracklet's identity, captions, motion, and path.

    Record 0 is the environment: it stands for the entire video, carries an
    empty trajectory, and is the only record allowed to carry audio.
    """

    id: int
    category: str
    appearance: str
    motion: tuple[MotionSegment, ...]
    trajectory: tuple[TrajectoryPoint, ...]
    audio: AudioAnnotation | None = None

    def __post_init__(self):
        object.__setattr__(self, "motion", tuple(self.motion))
        object.__setattr__(self, "trajectory", tuple(self.trajectory))
        _require(self.id >= 0, "record id non-negative")
        if self.id == ENVIRONMENT_ID:
            _require(not self.trajectory, "environment trajectory empty")
            _require(self.category == ENVIRONMENT_CATEGORY, "environment category",
                     f"got {self.category!r}")
        else:
            _require(bool(self.trajectory), "trajectory non-empty", f"record {self.id}")
            _require(self.audio is None, "audio only on environment", f"record {self.id}")
        frames = [p.frame_index for p in self.trajectory]
        _require(all(a < b for a, b in zip(frames, frames[1:])),
                 "trajectory sorted", f"record {self.id}")
        for prev, cur in zip(self.motion, self.motion[1:]):
            _require(cur.start_s >= prev.end_s - _REL_TOL * max(1.0, prev.end_s),
                     "motion segments ordered", f"record {self.id}")

    @property
    def first_timestamp(self) -> float | None:
        return self.trajectory[0].timestamp_s if self.trajectory else None

    @property
    def last_timestamp(self) -> float | None:
        return self.trajectory[-1].timestamp_s if self.trajectory else None


@dataclass(frozen=True)
class TrackletDatabase:
    """All records for one video: the unit of persistence and querying."""

    video: VideoMeta
    records: tuple[TrackletRecord, ...]

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        environment = [r for r in self.records if r.id == ENVIRONMENT_ID]
        _require(len(environment) <= 1, "unique environment")
        _require(len(environment) == 1, "missing environment")
        ids = [r.id for r in self.records]
        _require(len(set(ids)) == len(ids), "unique record ids")
        frame_s = 1.0 / self.video.fps
        for record in self.records:
            for point in record.trajectory:
                _require(point.frame_index < self.video.num_frames, "frame in range",
                         f"record {record.id} frame {point.frame_index}")
                _require(point.bbox.within(self.video.width, self.video.height),
                         "bbox in frame", f"record {record.id} frame {point.frame_index}")
                expected = point.frame_index / self.video.fps
                _require(math.isclose(point.timestamp_s, expected,
                                      rel_tol=_REL_TOL, abs_tol=_REL_TOL),
                         "timestamp formula",
                         f"record {record.id} frame {point.frame_index}")
            for segment in record.motion:
                _require(segment.end_s <= self.video.duration_s + frame_s + _REL_TOL,
                         "motion segment bounds",
                         f"record {record.id} ends at {segment.end_s}")
            if record.id != ENVIRONMENT_ID:
                self._check_motion_coverage(record, frame_s)

    def _check_motion_coverage(self, record: TrackletRecord, frame_s: float) -> None:
        slack = frame_s + _REL_TOL
        _require(bool(record.motion), "motion coverage", f"record {record.id} has no segments")
        _require(abs(record.motion[0].start_s - record.first_timestamp) <= slack,
                 "motion coverage", f"record {record.id} starts late")
        _require(abs(record.motion[-1].end_s - record.last_timestamp) <= slack,
                 "motion coverage", f"record {record.id} ends early")
        for prev, cur in zip(record.motion, record.motion[1:]):
            _require(abs(cur.start_s - prev.end_s) <= slack,
                     "motion coverage", f"record {record.id} has a gap at {prev.end_s}")

    @property
    def environment(self) -> TrackletRecord:
        return next(r for r in self.records if r.id == ENVIRONMENT_ID)

    def record_by_id(self, record_id: int) -> TrackletRecord | None:
        for record in self.records:
            if record.id == record_id:
                return record
        return None


def frame_timestamp(frame_index: int, fps: float) -> float:
    """Timestamp in seconds of a frame index at the given frame rate."""
    if fps <= 0:
        raise InvalidArgument(f"fps must be positive, got {fps}")
    if frame_index < 0:
        raise InvalidArgument(f"frame index must be non-negative, got {frame_index}")
    return frame_index / fps


def keyframe_score(bbox: BoundingBox, width: int, height: int) -> float:
    """Keyframe preference: sqrt of box area plus minimum distance to the frame edge."""
    if width <= 0 or height <= 0:
        raise InvalidArgument(f"frame size must be positive, got {width}x{height}")
    if not bbox.within(width, height):
        raise InvalidArgument(f"bbox {bbox.as_tuple()} outside {width}x{height} frame")
    distance = min(bbox.x1, bbox.y1, width - bbox.x2, height - bbox.y2)
    return math.sqrt(bbox.area) + distance


def select_keyframe(trajectory: Sequence[TrajectoryPoint], width: int, height: int) -> int:
    """Frame index of the highest-scoring point; ties break to the lowest frame."""
    if not trajectory:
        raise InvalidArgument("cannot select a keyframe from an empty trajectory")
    best_frame = None
    best_score = -math.inf
    for point in sorted(trajectory, key=lambda p: p.frame_index):
        score = keyframe_score(point.bbox, width, height)
        if score > best_score:
            best_frame = point.frame_index
            best_score = score
    return best_frame


def format_seconds(t: float) -> str:
    """Seconds for display: at most one decimal place, trailing ".0" dropped."""
    rounded = round(float(t), 1)
    if float(rounded).is_integer():
        return str(int(rounded))
    return f"{rounded:.1f}"


def format_coords(bbox: BoundingBox) -> str:
    return f"({int(round(bbox.x1))},{int(round(bbox.y1))},{int(round(bbox.x2))},{int(round(bbox.y2))})"


def render_motion_text(segment: MotionSegment) -> str:
    """Motion line: 'From {start} to {end} s, {caption}'."""
    return (f"From {format_seconds(segment.start_s)} to "
            f"{format_seconds(segment.end_s)} s, {segment.caption}")


def render_trajectory_text(point: TrajectoryPoint, category: str,
                           style: Literal["compact", "verbose"] = "compact") -> str:
    """Trajectory line; compact is the canonical storage/display form."""
    time_part = f"at {format_seconds(point.timestamp_s)} s"
    coords = format_coords(point.bbox)
    if style == "compact":
        return f"{time_part}, {coords}"
    if style == "verbose":
        return f"{time_part}, the {category} locates at {coords}"
    raise InvalidArgument(f"unknown trajectory style {style!r}")


def nearest_point(trajectory: Sequence[TrajectoryPoint], t: float) -> TrajectoryPoint:
    """Trajectory point whose timestamp is nearest to t; ties go to the earlier point."""
    if not trajectory:
        raise InvalidArgument("empty trajectory")
    best = trajectory[0]
    best_delta = abs(best.timestamp_s - t)
    for point in trajectory[1:]:
        delta = abs(point.timestamp_s - t)
        if delta < best_delta:
            best = point
            best_delta = delta
    return best


def sample_trajectory(trajectory: Sequence[TrajectoryPoint],
                      stride_s: float) -> list[TrajectoryPoint]:
    """Points nearest to each stride tick from the first to the last timestamp."""
    if stride_s <= 0:
        raise InvalidArgument(f"stride must be positive, got {stride_s}")
    if not trajectory:
        return []
    first = trajectory[0].timestamp_s
    last = trajectory[-1].timestamp_s
    picked: list[TrajectoryPoint] = []
    tick = first
    while tick <= last + _REL_TOL:
        point = nearest_point(trajectory, tick)
        if not picked or picked[-1].frame_index != point.frame_index:
            picked.append(point)
        tick += stride_s
    return picked


def motion_cell(record: TrackletRecord) -> str:
    """The record's motion lines joined for one table cell."""
    return "; ".join(render_motion_text(segment) for segment in record.motion)


def trajectory_cell(record: TrackletRecord, stride_s: float = 1.0) -> str | None:
    """Compact trajectory lines sampled at the stride, or None when trackless."""
    if not record.trajectory:
        return None
    points = sample_trajectory(record.trajectory, stride_s)
    return "; ".join(render_trajectory_text(p, record.category, "compact") for p in points)


def audio_cell(audio: AudioAnnotation | None) -> str | None:
    """Audio annotation as one cell: category, optional transcript and emotion."""
    if audio is None:
        return None
    text = audio.category
    if audio.transcript:
        text += f': "{audio.transcript}"'
    if audio.emotion:
        text += f" ({audio.emotion})"
    return text

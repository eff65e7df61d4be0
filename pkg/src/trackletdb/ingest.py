"""Build a TrackletDatabase from detector-tracker output and annotator clients."""

from __future__ import annotations

import json
from collections import Counter, defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .annotators import AnnotatorSuite
from .errors import InvalidArgument, MalformedInput
from .model import (
    ENVIRONMENT_CATEGORY,
    ENVIRONMENT_ID,
    AudioAnnotation,
    BoundingBox,
    MotionSegment,
    RegionRef,
    TrackletDatabase,
    TrackletRecord,
    TrajectoryPoint,
    VideoMeta,
    frame_timestamp,
    select_keyframe,
)

DETECTION_FIELDS = ("frame_index", "track_id", "category", "bbox", "confidence")


@dataclass(frozen=True)
class RawDetection:
    """One per-frame tracker output line; track id 0 is reserved for the environment."""

    frame_index: int
    track_id: int
    category: str
    bbox: BoundingBox
    confidence: float

    def __post_init__(self):
        if self.frame_index < 0:
            raise InvalidArgument(f"frame index must be non-negative, got {self.frame_index}")
        if self.track_id < 1:
            raise InvalidArgument(f"track id must be >= 1 (0 is reserved), got {self.track_id}")
        if not 0 <= self.confidence <= 1:
            raise InvalidArgument(f"confidence must be in [0, 1], got {self.confidence}")


@dataclass(frozen=True)
class IngestConfig:
    segment_len_frames: int = 32
    min_tail_frames: int = 8
    always_asr: bool = True
    trajectory_render_stride_s: float = 1.0

    def __post_init__(self):
        if self.segment_len_frames < 1:
            raise InvalidArgument(f"segment length must be >= 1, got {self.segment_len_frames}")
        if not 1 <= self.min_tail_frames <= self.segment_len_frames:
            raise InvalidArgument(
                f"min tail must be in [1, {self.segment_len_frames}], got {self.min_tail_frames}")
        if self.trajectory_render_stride_s <= 0:
            raise InvalidArgument("trajectory render stride must be positive")


@dataclass(frozen=True)
class GroupedTrack:
    """All of one track id's detections folded into a single trajectory."""

    track_id: int
    category: str
    trajectory: tuple[TrajectoryPoint, ...]

    @property
    def start_frame(self) -> int:
        return self.trajectory[0].frame_index

    @property
    def end_frame(self) -> int:
        return self.trajectory[-1].frame_index


def group_tracks(detections: Iterable[RawDetection], fps: float) -> list[GroupedTrack]:
    """Group per-frame detections by track id, majority-voting the category.

    Category ties break lexicographically; output is ordered by ascending
    track id with each trajectory sorted by frame.
    """
    by_track: dict[int, list[RawDetection]] = defaultdict(list)
    seen: set[tuple[int, int]] = set()
    for det in detections:
        key = (det.track_id, det.frame_index)
        if key in seen:
            raise MalformedInput(
                f"duplicate detection for track {det.track_id} at frame {det.frame_index}")
        seen.add(key)
        by_track[det.track_id].append(det)

    tracks = []
    for track_id in sorted(by_track):
        dets = sorted(by_track[track_id], key=lambda d: d.frame_index)
        votes = Counter(d.category for d in dets)
        top = max(votes.values())
        category = min(label for label, count in votes.items() if count == top)
        trajectory = tuple(
            TrajectoryPoint(d.frame_index, frame_timestamp(d.frame_index, fps), d.bbox)
            for d in dets)
        tracks.append(GroupedTrack(track_id, category, trajectory))
    return tracks


def segment_tracklet(st: int, ed: int, config: IngestConfig) -> list[tuple[int, int]]:
    """Half-open fixed-length windows covering frames [st, ed+1).

    A final window shorter than min_tail_frames is merged into its
    predecessor; a lone window shorter than the segment length is kept whole.
    """
    if st > ed:
        raise InvalidArgument(f"segment range inverted: st={st} > ed={ed}")
    length = config.segment_len_frames
    windows = [(start, min(start + length, ed + 1)) for start in range(st, ed + 1, length)]
    if len(windows) >= 2 and windows[-1][1] - windows[-1][0] < config.min_tail_frames:
        last = windows.pop()
        windows[-1] = (windows[-1][0], last[1])
    return windows


def build_prompts(category: str) -> tuple[str, str]:
    """Captioning prompts: each question is followed by the continuation stub."""
    if not category:
        raise InvalidArgument("category must be non-empty")
    appearance = f"What does the {category} look like? The {category}"
    motion = f"What is the {category} doing? The {category}"
    return appearance, motion


def _window_bbox(trajectory: Sequence[TrajectoryPoint], start: int, end: int) -> BoundingBox | None:
    """Union of the track's boxes inside the half-open frame window."""
    boxes = [p.bbox for p in trajectory if start <= p.frame_index < end]
    if not boxes:
        return None
    return BoundingBox(min(b.x1 for b in boxes), min(b.y1 for b in boxes),
                       max(b.x2 for b in boxes), max(b.y2 for b in boxes))


def _caption_motion(category: str, trajectory: Sequence[TrajectoryPoint] | None,
                    windows: Sequence[tuple[int, int]], video: VideoMeta,
                    annotators: AnnotatorSuite, prompt: str) -> tuple[MotionSegment, ...]:
    segments = []
    for start, end in windows:
        bbox = _window_bbox(trajectory, start, end) if trajectory is not None else None
        caption = annotators.video_caption(video.video_id, start, end, bbox, prompt)
        segments.append(MotionSegment(frame_timestamp(start, video.fps),
                                      frame_timestamp(end, video.fps), caption))
    return tuple(segments)


def annotate_tracklet(track: GroupedTrack, video: VideoMeta, annotators: AnnotatorSuite,
                      config: IngestConfig, record_id: int | None = None) -> TrackletRecord:
    """Caption one grouped track's keyframe appearance and windowed motion."""
    if not track.trajectory:
        raise InvalidArgument(f"track {track.track_id} has an empty trajectory")
    appearance_prompt, motion_prompt = build_prompts(track.category)
    keyframe = select_keyframe(track.trajectory, video.width, video.height)
    keyframe_bbox = next(p.bbox for p in track.trajectory if p.frame_index == keyframe)
    appearance = annotators.image_caption(
        RegionRef(video.video_id, keyframe, keyframe_bbox), appearance_prompt)
    windows = segment_tracklet(track.start_frame, track.end_frame, config)
    motion = _caption_motion(track.category, track.trajectory, windows, video,
                             annotators, motion_prompt)
    return TrackletRecord(
        id=track.track_id if record_id is None else record_id,
        category=track.category,
        appearance=appearance,
        motion=motion,
        trajectory=track.trajectory,
    )


def annotate_audio(video: VideoMeta, annotators: AnnotatorSuite,
                   config: IngestConfig) -> AudioAnnotation:
    """Classify the audio track; transcribe and read emotion per the speech rule.

    ASR also runs for non-speech categories when always_asr is set; emotion
    is read only when the category itself is speech-related.
    """
    category = annotators.audio_classify(video.video_id)
    is_speech = "speech" in category.lower()
    transcript = None
    if is_speech or config.always_asr:
        transcript = annotators.transcribe(video.video_id)
    emotion = None
    if is_speech:
        emotion = annotators.classify_emotion(video.video_id)
    return AudioAnnotation(category=category, transcript=transcript, emotion=emotion)


def _environment_record(video: VideoMeta, tracks: Sequence[GroupedTrack],
                        annotators: AnnotatorSuite, config: IngestConfig) -> TrackletRecord:
    # Scene appearance comes from the longest track's keyframe (frame 0 when
    # there are no tracks), cropped to the full frame.
    if tracks:
        longest = max(tracks, key=lambda t: (t.end_frame - t.start_frame, -t.track_id))
        frame = select_keyframe(longest.trajectory, video.width, video.height)
    else:
        frame = 0
    appearance_prompt, motion_prompt = build_prompts(ENVIRONMENT_CATEGORY)
    full_frame = BoundingBox(0, 0, video.width, video.height)
    appearance = annotators.image_caption(
        RegionRef(video.video_id, frame, full_frame), appearance_prompt)
    motion: tuple[MotionSegment, ...] = ()
    if video.num_frames > 0:
        windows = segment_tracklet(0, video.num_frames - 1, config)
        motion = _caption_motion(ENVIRONMENT_CATEGORY, None, windows, video,
                                 annotators, motion_prompt)
    audio = None
    if annotators.has_audio_pipeline:
        audio = annotate_audio(video, annotators, config)
    return TrackletRecord(
        id=ENVIRONMENT_ID,
        category=ENVIRONMENT_CATEGORY,
        appearance=appearance,
        motion=motion,
        trajectory=(),
        audio=audio,
    )


def build_database(video: VideoMeta, detections: Iterable[RawDetection],
                   annotators: AnnotatorSuite, config: IngestConfig = IngestConfig(),
                   max_workers: int = 1) -> TrackletDatabase:
    """Annotate every track plus the environment record into one database.

    Record ids are assigned 1..N by ascending track id; record 0 is always the
    environment. Per-tracklet annotation may run on a thread pool; the output
    ordering is by record id regardless of completion order.
    """
    tracks = group_tracks(detections, video.fps)
    environment = _environment_record(video, tracks, annotators, config)
    if max_workers > 1 and tracks:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            records = list(pool.map(
                lambda pair: annotate_tracklet(pair[1], video, annotators, config,
                                               record_id=pair[0]),
                enumerate(tracks, start=1)))
    else:
        records = [annotate_tracklet(track, video, annotators, config, record_id=index)
                   for index, track in enumerate(tracks, start=1)]
    return TrackletDatabase(video=video, records=(environment, *records))


def parse_detections(text: str) -> list[RawDetection]:
    """Parse a newline-delimited JSON detections document.

    Errors carry the byte offset of the offending line in the UTF-8 document.
    """
    detections = []
    offset = 0
    for line_no, line in enumerate(text.split("\n"), start=1):
        stripped = line.strip()
        if stripped:
            detections.append(_parse_detection_line(stripped, line_no, offset))
        offset += len(line.encode("utf-8")) + 1
    return detections


def _parse_detection_line(line: str, line_no: int, offset: int) -> RawDetection:
    def fail(why: str) -> MalformedInput:
        return MalformedInput(f"line {line_no} (byte {offset}): {why}", byte_offset=offset)

    try:
        doc = json.loads(line)
    except json.JSONDecodeError as exc:
        raise fail(f"invalid JSON: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise fail("expected a JSON object")
    if set(doc) != set(DETECTION_FIELDS):
        raise fail(f"fields must be exactly {list(DETECTION_FIELDS)}, got {sorted(doc)}")
    bbox = doc["bbox"]
    if (not isinstance(bbox, list) or len(bbox) != 4
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in bbox)):
        raise fail("bbox must be a list of four numbers")
    if not isinstance(doc["frame_index"], int) or not isinstance(doc["track_id"], int):
        raise fail("frame_index and track_id must be integers")
    if not isinstance(doc["category"], str):
        raise fail("category must be a string")
    if not isinstance(doc["confidence"], (int, float)) or isinstance(doc["confidence"], bool):
        raise fail("confidence must be a number")
    try:
        return RawDetection(
            frame_index=doc["frame_index"],
            track_id=doc["track_id"],
            category=doc["category"],
            bbox=BoundingBox(*bbox),
            confidence=float(doc["confidence"]),
        )
    except InvalidArgument as exc:
        raise fail(str(exc)) from exc


def load_detections(path: str | Path) -> list[RawDetection]:
    return parse_detections(Path(path).read_text(encoding="utf-8"))


def render_detections(detections: Iterable[RawDetection]) -> str:
    """Serialize detections back to the newline-delimited JSON exchange format."""
    lines = []
    for det in detections:
        bbox = [int(v) if v.is_integer() else v for v in det.bbox.as_tuple()]
        confidence = int(det.confidence) if float(det.confidence).is_integer() else det.confidence
        lines.append(json.dumps({
            "frame_index": det.frame_index,
            "track_id": det.track_id,
            "category": det.category,
            "bbox": bbox,
            "confidence": confidence,
        }, ensure_ascii=False, separators=(",", ":")))
    return "\n".join(lines) + ("\n" if lines else "")

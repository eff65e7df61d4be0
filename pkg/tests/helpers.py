"""Shared generators and independent oracles for the test suite.

The oracles deliberately re-derive behavior from first principles (their own
formatting, sampling, and evaluation loops) so agreement with the package is
meaningful.
"""

from __future__ import annotations

import math
import random

from trackletdb.annotators import AnnotatorSuite, SyntheticAnnotator
from trackletdb.ingest import IngestConfig, RawDetection, build_database
from trackletdb.model import BoundingBox, TrackletDatabase, VideoMeta
from trackletdb.tql import (
    ASC,
    DESC,
    And,
    Compare,
    Contains,
    CountStar,
    Field,
    FieldRef,
    FuncCall,
    Literal,
    Not,
    Or,
    Overlaps,
    QueryIR,
)

CATEGORIES = ("person", "motorcycle", "dog", "car", "tv", "laptop", "bird",
              "café sign")

FRAME_SIZES = ((320, 240), (640, 360), (1280, 720))

FPS_CHOICES = (1.0, 2.0, 5.0, 10.0, 24.0, 30.0)


def random_video(rng: random.Random, index: int = 0,
                 max_frames: int = 120) -> VideoMeta:
    fps = rng.choice(FPS_CHOICES)
    num_frames = rng.randint(1, max_frames)
    width, height = rng.choice(FRAME_SIZES)
    return VideoMeta(video_id=f"vid{index}", path=f"vid{index}.mp4", fps=fps,
                     width=width, height=height, num_frames=num_frames,
                     duration_s=num_frames / fps)


def random_bbox(rng: random.Random, width: int, height: int) -> BoundingBox:
    def coord(limit: int) -> tuple[float, float]:
        a = rng.randint(0, limit - 1)
        b = rng.randint(a + 1, limit)
        if rng.random() < 0.25:
            a += 0.5
        return a, b

    x1, x2 = coord(width)
    y1, y2 = coord(height)
    return BoundingBox(x1, y1, x2, y2)


def random_detections(rng: random.Random, video: VideoMeta,
                      max_tracks: int = 6) -> list[RawDetection]:
    detections = []
    for track_id in range(1, rng.randint(0, max_tracks) + 1):
        start = rng.randrange(video.num_frames)
        span = rng.randint(1, video.num_frames - start)
        frames = sorted(rng.sample(range(start, start + span),
                                   k=rng.randint(1, span)))
        category = rng.choice(CATEGORIES)
        for frame in frames:
            detections.append(RawDetection(
                frame_index=frame, track_id=track_id, category=category,
                bbox=random_bbox(rng, video.width, video.height),
                confidence=round(rng.random(), 3)))
    return detections


def random_database(rng: random.Random, index: int = 0, max_tracks: int = 6,
                    max_frames: int = 120) -> TrackletDatabase:
    """A valid database built through the real ingestion pipeline."""
    video = random_video(rng, index, max_frames=max_frames)
    detections = random_detections(rng, video, max_tracks=max_tracks)
    synth = SyntheticAnnotator()
    if rng.random() < 0.3:
        suite = AnnotatorSuite(image_captioner=synth, video_captioner=synth)
    else:
        suite = AnnotatorSuite.synthetic()
    config = IngestConfig(
        segment_len_frames=rng.choice((8, 16, 32)),
        min_tail_frames=rng.choice((1, 4, 8)),
        always_asr=rng.random() < 0.7,
    )
    return build_database(video, detections, suite, config)


# --- random query IRs --------------------------------------------------------

_TEXT_FIELDS = (Field.CATEGORY, Field.APPEARANCE, Field.MOTION,
                Field.TRAJECTORY, Field.AUDIO)

_STRING_ALPHABET = " abcxyz'09_,()éλ\""


def random_number(rng: random.Random):
    if rng.random() < 0.6:
        return rng.randint(-5, 40)
    return round(rng.uniform(-3.0, 40.0), 3)


def random_text(rng: random.Random) -> str:
    if rng.random() < 0.5:
        return rng.choice(CATEGORIES)
    return "".join(rng.choice(_STRING_ALPHABET)
                   for _ in range(rng.randint(0, 8)))


def random_numeric_expr(rng: random.Random, allow_literal: bool = True):
    choices = ["id", "duration", "avg_velocity"]
    if allow_literal:
        choices.append("literal")
    kind = rng.choice(choices)
    if kind == "id":
        return FieldRef(Field.ID)
    if kind == "duration":
        return FuncCall("duration")
    if kind == "avg_velocity":
        return FuncCall("avg_velocity")
    return Literal(random_number(rng))


def random_text_expr(rng: random.Random):
    if rng.random() < 0.6:
        return FieldRef(rng.choice(_TEXT_FIELDS))
    return Literal(random_text(rng))


def random_comparison(rng: random.Random):
    op = rng.choice(("=", "!=", "<", "<=", ">", ">="))
    if rng.random() < 0.5:
        return Compare(op, random_numeric_expr(rng), random_numeric_expr(rng))
    return Compare(op, random_text_expr(rng), random_text_expr(rng))


def random_predicate(rng: random.Random, depth: int = 0):
    if depth < 3 and rng.random() < 0.4:
        kind = rng.choice(("and", "or", "not"))
        if kind == "and":
            return And(random_predicate(rng, depth + 1),
                       random_predicate(rng, depth + 1))
        if kind == "or":
            return Or(random_predicate(rng, depth + 1),
                      random_predicate(rng, depth + 1))
        return Not(random_predicate(rng, depth + 1))
    roll = rng.random()
    if roll < 0.15:
        t1, t2 = random_number(rng), random_number(rng)
        return Overlaps(t1, t2)
    if roll < 0.4:
        return Contains(random_text_expr(rng), random_text_expr(rng))
    return random_comparison(rng)


def random_projection(rng: random.Random):
    roll = rng.random()
    if roll < 0.55:
        return FieldRef(rng.choice(tuple(Field)))
    if roll < 0.7:
        return FuncCall("duration")
    if roll < 0.85:
        return FuncCall("avg_velocity")
    return FuncCall("position_at", (abs(random_number(rng)),))


def random_ir(rng: random.Random) -> QueryIR:
    if rng.random() < 0.2:
        projections: tuple = (CountStar(),)
    else:
        projections = tuple(random_projection(rng)
                            for _ in range(rng.randint(1, 3)))
    predicate = random_predicate(rng) if rng.random() < 0.7 else None
    order_by = None
    if rng.random() < 0.4:
        order_by = (random_numeric_expr(rng), rng.choice((ASC, DESC)))
    limit = rng.randint(1, 10) if rng.random() < 0.4 else None
    return QueryIR(projections=projections, predicate=predicate,
                   order_by=order_by, limit=limit)


# --- independent oracles -----------------------------------------------------

def oracle_seconds(t: float) -> str:
    value = round(float(t), 1)
    if value == int(value):
        return str(int(value))
    return f"{value:.1f}"


def oracle_motion_cell(record) -> str:
    return "; ".join(
        f"From {oracle_seconds(seg.start_s)} to {oracle_seconds(seg.end_s)} s, "
        f"{seg.caption}"
        for seg in record.motion)


def _oracle_nearest(points, t):
    best = points[0]
    for point in points[1:]:
        if abs(point.timestamp_s - t) < abs(best.timestamp_s - t):
            best = point
    return best


def oracle_trajectory_cell(record, stride_s: float = 1.0):
    points = record.trajectory
    if not points:
        return None
    picked = []
    tick = points[0].timestamp_s
    while tick <= points[-1].timestamp_s + 1e-9:
        point = _oracle_nearest(points, tick)
        if not picked or picked[-1] is not point:
            picked.append(point)
        tick += stride_s
    parts = []
    for point in picked:
        b = point.bbox
        coords = (f"({int(round(b.x1))},{int(round(b.y1))},"
                  f"{int(round(b.x2))},{int(round(b.y2))})")
        parts.append(f"at {oracle_seconds(point.timestamp_s)} s, {coords}")
    return "; ".join(parts)


def oracle_audio_cell(audio):
    if audio is None:
        return None
    text = audio.category
    if audio.transcript:
        text += f': "{audio.transcript}"'
    if audio.emotion:
        text += f" ({audio.emotion})"
    return text


def oracle_scalar(expr, record, video, stride_s: float = 1.0):
    if isinstance(expr, Literal):
        return expr.value
    if isinstance(expr, FieldRef):
        field = expr.field
        if field is Field.ID:
            return record.id
        if field is Field.CATEGORY:
            return record.category
        if field is Field.APPEARANCE:
            return record.appearance
        if field is Field.MOTION:
            return oracle_motion_cell(record)
        if field is Field.TRAJECTORY:
            return oracle_trajectory_cell(record, stride_s)
        return oracle_audio_cell(record.audio)
    name = expr.name
    if name == "duration":
        if not record.trajectory:
            return float(video.duration_s)
        return record.trajectory[-1].timestamp_s - record.trajectory[0].timestamp_s
    if name == "avg_velocity":
        points = record.trajectory
        if len(points) < 2:
            return 0.0
        total = 0.0
        for a, b in zip(points, points[1:]):
            ax, ay = (a.bbox.x1 + a.bbox.x2) / 2, (a.bbox.y1 + a.bbox.y2) / 2
            bx, by = (b.bbox.x1 + b.bbox.x2) / 2, (b.bbox.y1 + b.bbox.y2) / 2
            total += math.hypot(bx - ax, by - ay)
        return total / (points[-1].timestamp_s - points[0].timestamp_s)
    if name == "position_at":
        if not record.trajectory:
            raise ValueError("no trajectory")
        return _oracle_nearest(record.trajectory, expr.args[0]).bbox
    raise ValueError(name)


def oracle_predicate(node, record, video) -> bool:
    if isinstance(node, And):
        return (oracle_predicate(node.lhs, record, video)
                and oracle_predicate(node.rhs, record, video))
    if isinstance(node, Or):
        return (oracle_predicate(node.lhs, record, video)
                or oracle_predicate(node.rhs, record, video))
    if isinstance(node, Not):
        return not oracle_predicate(node.operand, record, video)
    if isinstance(node, Overlaps):
        if not record.trajectory:
            return True
        return (record.trajectory[0].timestamp_s <= node.t2
                and record.trajectory[-1].timestamp_s >= node.t1)
    lhs = oracle_scalar(node.lhs, record, video)
    rhs = oracle_scalar(node.rhs, record, video)
    if lhs is None or rhs is None:
        return False
    if isinstance(node, Contains):
        return rhs.lower() in lhs.lower()
    op = node.op
    if op == "=":
        return lhs == rhs
    if op == "!=":
        return lhs != rhs
    if op == "<":
        return lhs < rhs
    if op == "<=":
        return lhs <= rhs
    if op == ">":
        return lhs > rhs
    return lhs >= rhs


def oracle_evaluate(ir: QueryIR, db: TrackletDatabase,
                    stride_s: float = 1.0):
    """Brute-force interpreter: returns (rows, record_ids)."""
    video = db.video
    matched = [r for r in db.records
               if ir.predicate is None or oracle_predicate(ir.predicate, r, video)]
    if ir.order_by is not None:
        expr, direction = ir.order_by
        keyed = [(oracle_scalar(expr, record, video), i, record)
                 for i, record in enumerate(matched)]
        if direction == DESC:
            keyed.sort(key=lambda kv: (-kv[0], kv[1]))
        else:
            keyed.sort(key=lambda kv: (kv[0], kv[1]))
        matched = [record for _, _, record in keyed]
    if ir.limit is not None:
        matched = matched[:ir.limit]
    if isinstance(ir.projections[0], CountStar):
        return [(len(matched),)], [None]
    rows = []
    for record in matched:
        cells = []
        for proj in ir.projections:
            if isinstance(proj, FuncCall) and proj.name == "position_at":
                if not record.trajectory:
                    raise ValueError("no trajectory")
                point = _oracle_nearest(record.trajectory, proj.args[0])
                b = point.bbox
                coords = (f"({int(round(b.x1))},{int(round(b.y1))},"
                          f"{int(round(b.x2))},{int(round(b.y2))})")
                cells.append(f"at {oracle_seconds(point.timestamp_s)} s, {coords}")
            else:
                cells.append(oracle_scalar(proj, record, video, stride_s))
        rows.append(tuple(cells))
    return rows, [record.id for record in matched]

"""Evaluation of QueryIR against a tracklet database."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from ..errors import EvaluationError
from ..model import (
    BoundingBox,
    TrackletDatabase,
    TrackletRecord,
    VideoMeta,
    audio_cell,
    motion_cell,
    nearest_point,
    render_trajectory_text,
    trajectory_cell,
)
from .ast import (
    DESC,
    FUNC_AVG_VELOCITY,
    FUNC_DURATION,
    FUNC_POSITION_AT,
    And,
    Compare,
    Contains,
    Field,
    FieldRef,
    FuncCall,
    Literal,
    Not,
    Or,
    Overlaps,
    Predicate,
    QueryIR,
    ScalarExpr,
)
from .printer import projection_label

Cell = Union[int, float, str, None]


@dataclass(frozen=True)
class ResultSet:
    """Rows produced by one query, with enough context to phrase an answer.

    record_ids and categories run parallel to rows; a COUNT result has a
    single row whose record id and category are both None.
    """

    columns: tuple[str, ...]
    rows: tuple[tuple[Cell, ...], ...]
    record_ids: tuple[Union[int, None], ...]
    categories: tuple[Union[str, None], ...]
    query: QueryIR

    def __post_init__(self):
        object.__setattr__(self, "columns", tuple(self.columns))
        object.__setattr__(self, "rows", tuple(tuple(row) for row in self.rows))
        object.__setattr__(self, "record_ids", tuple(self.record_ids))
        object.__setattr__(self, "categories", tuple(self.categories))

    @property
    def is_empty(self) -> bool:
        return not self.rows


def evaluate(ir: QueryIR, db: TrackletDatabase, *,
             trajectory_stride_s: float = 1.0) -> ResultSet:
    """Run one query: filter, order, limit, project."""
    video = db.video
    matched = [record for record in db.records
               if ir.predicate is None or eval_predicate(ir.predicate, record, video)]
    if ir.order_by is not None:
        expr, direction = ir.order_by
        matched.sort(key=lambda record: _numeric(expr, record, video),
                     reverse=direction == DESC)
    if ir.limit is not None:
        matched = matched[:ir.limit]

    columns = tuple(projection_label(p) for p in ir.projections)
    if ir.is_count:
        return ResultSet(columns=columns, rows=((len(matched),),),
                         record_ids=(None,), categories=(None,), query=ir)
    rows = tuple(
        tuple(_project(p, record, video, trajectory_stride_s) for p in ir.projections)
        for record in matched)
    return ResultSet(columns=columns, rows=rows,
                     record_ids=tuple(record.id for record in matched),
                     categories=tuple(record.category for record in matched),
                     query=ir)


def eval_predicate(node: Predicate, record: TrackletRecord, video: VideoMeta) -> bool:
    if isinstance(node, And):
        return (eval_predicate(node.lhs, record, video)
                and eval_predicate(node.rhs, record, video))
    if isinstance(node, Or):
        return (eval_predicate(node.lhs, record, video)
                or eval_predicate(node.rhs, record, video))
    if isinstance(node, Not):
        return not eval_predicate(node.operand, record, video)
    if isinstance(node, Overlaps):
        # Records without a trajectory (the environment) span the whole video.
        if not record.trajectory:
            return True
        return (record.first_timestamp <= node.t2
                and record.last_timestamp >= node.t1)
    if isinstance(node, Compare):
        return _compare(node.op, eval_scalar(node.lhs, record, video),
                        eval_scalar(node.rhs, record, video))
    if isinstance(node, Contains):
        return _contains(eval_scalar(node.lhs, record, video),
                         eval_scalar(node.rhs, record, video))
    raise EvaluationError(f"not a predicate: {node!r}")


def eval_scalar(expr: ScalarExpr, record: TrackletRecord, video: VideoMeta):
    """Raw scalar value: numbers, text, None, or a bbox for position_at."""
    if isinstance(expr, Literal):
        return expr.value
    if isinstance(expr, FieldRef):
        return _field_value(expr.field, record)
    if isinstance(expr, FuncCall):
        if expr.name == FUNC_DURATION:
            return duration(record, video)
        if expr.name == FUNC_AVG_VELOCITY:
            return avg_velocity(record)
        if expr.name == FUNC_POSITION_AT:
            return position_at(record, expr.args[0])
    raise EvaluationError(f"not a scalar expression: {expr!r}")


def duration(record: TrackletRecord, video: VideoMeta) -> float:
    """Seconds the tracklet is visible; the environment spans the whole video."""
    if not record.trajectory:
        return float(video.duration_s)
    return record.last_timestamp - record.first_timestamp


def avg_velocity(record: TrackletRecord) -> float:
    """Mean speed of the bbox center in pixels per second; 0 for short tracks."""
    points = record.trajectory
    if len(points) < 2:
        return 0.0
    path = 0.0
    for prev, cur in zip(points, points[1:]):
        px, py = prev.bbox.center
        cx, cy = cur.bbox.center
        path += math.hypot(cx - px, cy - py)
    elapsed = points[-1].timestamp_s - points[0].timestamp_s
    return path / elapsed


def position_at(record: TrackletRecord, t: float) -> BoundingBox:
    if not record.trajectory:
        raise EvaluationError("no trajectory")
    return nearest_point(record.trajectory, t).bbox


def _field_value(field: Field, record: TrackletRecord) -> Cell:
    if field is Field.ID:
        return record.id
    if field is Field.CATEGORY:
        return record.category
    if field is Field.APPEARANCE:
        return record.appearance
    if field is Field.MOTION:
        return motion_cell(record)
    if field is Field.TRAJECTORY:
        return trajectory_cell(record)
    if field is Field.AUDIO:
        return audio_cell(record.audio)
    raise EvaluationError(f"unknown field {field!r}")


def _project(node, record: TrackletRecord, video: VideoMeta,
             stride_s: float) -> Cell:
    if isinstance(node, FieldRef):
        if node.field is Field.TRAJECTORY:
            return trajectory_cell(record, stride_s)
        return _field_value(node.field, record)
    if isinstance(node, FuncCall) and node.name == FUNC_POSITION_AT:
        if not record.trajectory:
            raise EvaluationError("no trajectory")
        point = nearest_point(record.trajectory, node.args[0])
        return render_trajectory_text(point, record.category, "compact")
    return eval_scalar(node, record, video)


def _numeric(expr: ScalarExpr, record: TrackletRecord, video: VideoMeta) -> float:
    value = eval_scalar(expr, record, video)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise EvaluationError(f"expected a number, got {value!r}")
    return float(value)


def _is_number(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _compare(op: str, lhs, rhs) -> bool:
    if lhs is None or rhs is None:
        return False
    if _is_number(lhs) and _is_number(rhs):
        pass
    elif isinstance(lhs, str) and isinstance(rhs, str):
        pass
    else:
        raise EvaluationError(
            f"cannot compare {type(lhs).__name__} with {type(rhs).__name__}")
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
    if op == ">=":
        return lhs >= rhs
    raise EvaluationError(f"unknown comparison operator {op!r}")


def _contains(lhs, rhs) -> bool:
    if lhs is None or rhs is None:
        return False
    if not isinstance(lhs, str) or not isinstance(rhs, str):
        raise EvaluationError("CONTAINS requires text operands")
    return rhs.lower() in lhs.lower()

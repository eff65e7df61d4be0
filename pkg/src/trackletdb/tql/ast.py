"""Abstract syntax of TQL queries.

All nodes are immutable; equality is structural, which is what the
parse/pretty-print round-trip tests compare.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Union

from ..errors import InvalidArgument

NUMBER = "number"
TEXT = "text"
POSITION = "position"


class Field(enum.Enum):
    ID = "ID"
    CATEGORY = "Category"
    APPEARANCE = "Appearance"
    MOTION = "Motion"
    TRAJECTORY = "Trajectory"
    AUDIO = "Audio"

    @property
    def canonical(self) -> str:
        return self.value


FIELD_BY_NAME = {field.value.lower(): field for field in Field}
FIELD_TYPES = {
    Field.ID: NUMBER,
    Field.CATEGORY: TEXT,
    Field.APPEARANCE: TEXT,
    Field.MOTION: TEXT,
    Field.TRAJECTORY: TEXT,
    Field.AUDIO: TEXT,
}

FUNC_DURATION = "duration"
FUNC_AVG_VELOCITY = "avg_velocity"
FUNC_POSITION_AT = "position_at"
FUNCTION_NAMES = (FUNC_DURATION, FUNC_AVG_VELOCITY, FUNC_POSITION_AT)
FUNCTION_TYPES = {
    FUNC_DURATION: NUMBER,
    FUNC_AVG_VELOCITY: NUMBER,
    FUNC_POSITION_AT: POSITION,
}


@dataclass(frozen=True)
class FieldRef:
    field: Field


@dataclass(frozen=True)
class Literal:
    value: Union[int, float, str]


@dataclass(frozen=True)
class FuncCall:
    name: str
    args: tuple[Union[int, float], ...] = ()

    def __post_init__(self):
        if self.name not in FUNCTION_NAMES:
            raise InvalidArgument(f"unknown function {self.name!r}")
        arity = 1 if self.name == FUNC_POSITION_AT else 0
        if len(self.args) != arity:
            raise InvalidArgument(f"{self.name} takes {arity} argument(s)")


@dataclass(frozen=True)
class CountStar:
    pass


ScalarExpr = Union[FieldRef, Literal, FuncCall]


@dataclass(frozen=True)
class Compare:
    op: str  # one of = != < <= > >=
    lhs: ScalarExpr
    rhs: ScalarExpr


@dataclass(frozen=True)
class Contains:
    lhs: ScalarExpr
    rhs: ScalarExpr


@dataclass(frozen=True)
class Overlaps:
    t1: Union[int, float]
    t2: Union[int, float]


@dataclass(frozen=True)
class And:
    lhs: "Predicate"
    rhs: "Predicate"


@dataclass(frozen=True)
class Or:
    lhs: "Predicate"
    rhs: "Predicate"


@dataclass(frozen=True)
class Not:
    operand: "Predicate"


Predicate = Union[Compare, Contains, Overlaps, And, Or, Not]

ASC = "ASC"
DESC = "DESC"


@dataclass(frozen=True)
class QueryIR:
    """One parsed query: projections, optional predicate, ordering, and limit."""

    projections: tuple[Union[CountStar, FieldRef, FuncCall], ...]
    predicate: Predicate | None = None
    order_by: tuple[ScalarExpr, str] | None = None
    limit: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "projections", tuple(self.projections))
        if not self.projections:
            raise InvalidArgument("query must project at least one column")
        has_count = any(isinstance(p, CountStar) for p in self.projections)
        if has_count and len(self.projections) != 1:
            raise InvalidArgument("COUNT(*) cannot be mixed with other projections")
        if self.order_by is not None:
            expr, direction = self.order_by
            if direction not in (ASC, DESC):
                raise InvalidArgument(f"order direction must be ASC or DESC, got {direction!r}")
            if expr_type(expr) != NUMBER:
                raise InvalidArgument("ORDER BY expression must be numeric")
        if self.limit is not None and self.limit < 1:
            raise InvalidArgument(f"LIMIT must be a positive integer, got {self.limit}")

    @property
    def is_count(self) -> bool:
        return isinstance(self.projections[0], CountStar)


def expr_type(expr: ScalarExpr) -> str:
    if isinstance(expr, FieldRef):
        return FIELD_TYPES[expr.field]
    if isinstance(expr, Literal):
        return TEXT if isinstance(expr.value, str) else NUMBER
    if isinstance(expr, FuncCall):
        return FUNCTION_TYPES[expr.name]
    raise InvalidArgument(f"not a scalar expression: {expr!r}")

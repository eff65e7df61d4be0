"""TQL: the tracklet query language (parser, printer, evaluator)."""

from .ast import (
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
    Predicate,
    QueryIR,
    ScalarExpr,
)
from .evaluator import (
    ResultSet,
    avg_velocity,
    duration,
    eval_predicate,
    eval_scalar,
    evaluate,
    position_at,
)
from .parser import parse
from .printer import pretty_print, projection_label

__all__ = [
    "ASC",
    "DESC",
    "And",
    "Compare",
    "Contains",
    "CountStar",
    "Field",
    "FieldRef",
    "FuncCall",
    "Literal",
    "Not",
    "Or",
    "Overlaps",
    "Predicate",
    "QueryIR",
    "ResultSet",
    "ScalarExpr",
    "avg_velocity",
    "duration",
    "eval_predicate",
    "eval_scalar",
    "evaluate",
    "parse",
    "position_at",
    "pretty_print",
    "projection_label",
]

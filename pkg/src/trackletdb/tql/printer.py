"""Canonical single-line rendering of QueryIR.

parse(pretty_print(ir)) == ir for every valid IR; parentheses are emitted
only where the tree structure requires them.
"""

from __future__ import annotations

from ..errors import InvalidArgument
from .ast import (
    And,
    Compare,
    Contains,
    CountStar,
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

_PREC_OR = 1
_PREC_AND = 2
_PREC_NOT = 3
_PREC_ATOM = 4


def pretty_print(ir: QueryIR) -> str:
    parts = ["SELECT ", ", ".join(projection_label(p) for p in ir.projections),
             " FROM tracklets"]
    if ir.predicate is not None:
        parts.append(" WHERE ")
        parts.append(_predicate(ir.predicate, _PREC_OR))
    if ir.order_by is not None:
        expr, direction = ir.order_by
        parts.append(f" ORDER BY {_scalar(expr)} {direction}")
    if ir.limit is not None:
        parts.append(f" LIMIT {ir.limit}")
    return "".join(parts)


def projection_label(node) -> str:
    """Column header for one projection, in canonical spelling."""
    if isinstance(node, CountStar):
        return "COUNT(*)"
    return _scalar(node)


def _scalar(expr: ScalarExpr) -> str:
    if isinstance(expr, FieldRef):
        return expr.field.canonical
    if isinstance(expr, Literal):
        if isinstance(expr.value, str):
            return _quote(expr.value)
        return _number(expr.value)
    if isinstance(expr, FuncCall):
        args = ", ".join(_number(arg) for arg in expr.args)
        return f"{expr.name}({args})"
    raise InvalidArgument(f"not a scalar expression: {expr!r}")


def _number(value) -> str:
    if isinstance(value, bool):
        raise InvalidArgument("booleans are not TQL values")
    if isinstance(value, int):
        return str(value)
    return repr(value)


def _quote(text: str) -> str:
    return "'" + text.replace("'", "''") + "'"


def _predicate(node: Predicate, parent_prec: int) -> str:
    if isinstance(node, Or):
        rendered = f"{_predicate(node.lhs, _PREC_OR)} OR {_predicate(node.rhs, _PREC_OR + 1)}"
        prec = _PREC_OR
    elif isinstance(node, And):
        rendered = f"{_predicate(node.lhs, _PREC_AND)} AND {_predicate(node.rhs, _PREC_AND + 1)}"
        prec = _PREC_AND
    elif isinstance(node, Not):
        rendered = f"NOT {_predicate(node.operand, _PREC_NOT)}"
        prec = _PREC_NOT
    elif isinstance(node, Compare):
        rendered = f"{_scalar(node.lhs)} {node.op} {_scalar(node.rhs)}"
        prec = _PREC_ATOM
    elif isinstance(node, Contains):
        rendered = f"{_scalar(node.lhs)} CONTAINS {_scalar(node.rhs)}"
        prec = _PREC_ATOM
    elif isinstance(node, Overlaps):
        rendered = f"OVERLAPS({_number(node.t1)}, {_number(node.t2)})"
        prec = _PREC_ATOM
    else:
        raise InvalidArgument(f"not a predicate: {node!r}")
    if prec < parent_prec:
        return f"({rendered})"
    return rendered

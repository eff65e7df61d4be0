"""Recursive-descent parser from TQL text to QueryIR.

Syntax failures raise ParseError with the byte offset and the token set the
parser would have accepted; name and type failures raise SemanticError.
"""

from __future__ import annotations

from ..errors import ParseError, SemanticError
from .ast import (
    ASC,
    DESC,
    FIELD_BY_NAME,
    FUNC_POSITION_AT,
    FUNCTION_NAMES,
    NUMBER,
    POSITION,
    TEXT,
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
    expr_type,
)
from .lexer import Token, tokenize

COMPARE_OPS = ("=", "!=", "<", "<=", ">", ">=")


def parse(text: str | bytes) -> QueryIR:
    """Parse one TQL query; accepts raw bytes as UTF-8 with replacement."""
    if isinstance(text, bytes):
        text = text.decode("utf-8", errors="replace")
    return _Parser(tokenize(text)).parse_query()


class _Parser:
    def __init__(self, tokens: list[Token]):
        self._tokens = tokens
        self._pos = 0

    # --- token plumbing ---------------------------------------------------

    def _peek(self) -> Token:
        return self._tokens[self._pos]

    def _advance(self) -> Token:
        token = self._tokens[self._pos]
        if token.kind != "EOF":
            self._pos += 1
        return token

    def _check_keyword(self, *words: str) -> bool:
        token = self._peek()
        return token.kind == "KEYWORD" and token.text in words

    def _match_keyword(self, *words: str) -> Token | None:
        if self._check_keyword(*words):
            return self._advance()
        return None

    def _expect_keyword(self, word: str) -> Token:
        token = self._peek()
        if token.kind == "KEYWORD" and token.text == word:
            return self._advance()
        raise self._error(token, {word})

    def _check_symbol(self, *symbols: str) -> bool:
        token = self._peek()
        return token.kind == "SYMBOL" and token.text in symbols

    def _match_symbol(self, *symbols: str) -> Token | None:
        if self._check_symbol(*symbols):
            return self._advance()
        return None

    def _expect_symbol(self, symbol: str) -> Token:
        token = self._peek()
        if token.kind == "SYMBOL" and token.text == symbol:
            return self._advance()
        raise self._error(token, {f"'{symbol}'"})

    def _error(self, token: Token, expected: set[str]) -> ParseError:
        found = token.text if token.kind != "EOF" else "end of input"
        return ParseError(f"unexpected {found!r}", position=token.position,
                          expected=frozenset(expected))

    # --- grammar ------------------------------------------------------------

    def parse_query(self) -> QueryIR:
        self._expect_keyword("SELECT")
        projections = self._parse_projections()
        self._expect_keyword("FROM")
        self._expect_keyword("TRACKLETS")
        predicate = None
        if self._match_keyword("WHERE"):
            predicate = self._parse_predicate()
        order_by = None
        if self._match_keyword("ORDER"):
            self._expect_keyword("BY")
            order_by = self._parse_order()
        limit = None
        if self._match_keyword("LIMIT"):
            limit = self._parse_limit()
        tail = self._peek()
        if tail.kind != "EOF":
            raise self._error(tail, {"end of input"})
        return QueryIR(projections=tuple(projections), predicate=predicate,
                       order_by=order_by, limit=limit)

    def _parse_projections(self):
        if self._match_keyword("COUNT"):
            self._expect_symbol("(")
            self._expect_symbol("*")
            self._expect_symbol(")")
            if self._check_symbol(","):
                token = self._peek()
                raise SemanticError("COUNT(*) cannot be mixed with other projections",
                                    position=token.position)
            return [CountStar()]
        projections = [self._parse_projection()]
        while self._match_symbol(","):
            projections.append(self._parse_projection())
        return projections

    def _parse_projection(self):
        token = self._peek()
        if self._check_keyword("COUNT"):
            raise SemanticError("COUNT(*) cannot be mixed with other projections",
                                position=token.position)
        expr = self._parse_scalar()
        if isinstance(expr, Literal):
            raise SemanticError("projections must be fields or functions",
                                position=token.position)
        return expr

    def _parse_predicate(self) -> Predicate:
        return self._parse_or()

    def _parse_or(self) -> Predicate:
        expr = self._parse_and()
        while self._match_keyword("OR"):
            expr = Or(expr, self._parse_and())
        return expr

    def _parse_and(self) -> Predicate:
        expr = self._parse_not()
        while self._match_keyword("AND"):
            expr = And(expr, self._parse_not())
        return expr

    def _parse_not(self) -> Predicate:
        if self._match_keyword("NOT"):
            return Not(self._parse_not())
        return self._parse_primary()

    def _parse_primary(self) -> Predicate:
        if self._match_symbol("("):
            inner = self._parse_predicate()
            self._expect_symbol(")")
            return inner
        if self._match_keyword("OVERLAPS"):
            self._expect_symbol("(")
            t1 = self._parse_number()
            self._expect_symbol(",")
            t2 = self._parse_number()
            self._expect_symbol(")")
            return Overlaps(t1, t2)
        return self._parse_comparison()

    def _parse_comparison(self) -> Predicate:
        start = self._peek()
        lhs = self._parse_scalar()
        if self._match_keyword("CONTAINS"):
            rhs = self._parse_scalar()
            for side in (lhs, rhs):
                kind = expr_type(side)
                if kind != TEXT:
                    raise SemanticError(
                        f"CONTAINS requires text operands, got {kind}",
                        position=start.position)
            return Contains(lhs, rhs)
        op_token = self._peek()
        if op_token.kind == "SYMBOL" and op_token.text in COMPARE_OPS:
            self._advance()
            rhs = self._parse_scalar()
            lhs_type, rhs_type = expr_type(lhs), expr_type(rhs)
            if POSITION in (lhs_type, rhs_type):
                raise SemanticError("position_at(...) cannot be compared",
                                    position=op_token.position)
            if lhs_type != rhs_type:
                raise SemanticError(
                    f"comparison operand types differ: {lhs_type} vs {rhs_type}",
                    position=op_token.position)
            return Compare(op_token.text, lhs, rhs)
        raise self._error(op_token, set(COMPARE_OPS) | {"CONTAINS"})

    def _parse_scalar(self) -> ScalarExpr:
        token = self._peek()
        if token.kind == "NUMBER":
            self._advance()
            return Literal(token.value)
        if token.kind == "STRING":
            self._advance()
            return Literal(token.value)
        if token.kind == "IDENT":
            return self._parse_name()
        raise self._error(token, {"field", "function", "literal"})

    def _parse_name(self) -> ScalarExpr:
        token = self._advance()
        lower = token.text.lower()
        if lower in FIELD_BY_NAME:
            return FieldRef(FIELD_BY_NAME[lower])
        if lower in FUNCTION_NAMES:
            self._expect_symbol("(")
            args: tuple = ()
            if lower == FUNC_POSITION_AT:
                args = (self._parse_number(),)
            self._expect_symbol(")")
            return FuncCall(lower, args)
        raise SemanticError(f"unknown field or function {token.text!r}",
                            name=token.text, position=token.position)

    def _parse_number(self):
        token = self._peek()
        if token.kind != "NUMBER":
            raise self._error(token, {"number"})
        self._advance()
        return token.value

    def _parse_order(self):
        start = self._peek()
        expr = self._parse_scalar()
        if expr_type(expr) != NUMBER:
            raise SemanticError("ORDER BY expression must be numeric",
                                position=start.position)
        direction = ASC
        if self._match_keyword("DESC"):
            direction = DESC
        elif self._match_keyword("ASC"):
            direction = ASC
        return (expr, direction)

    def _parse_limit(self) -> int:
        token = self._peek()
        if token.kind != "NUMBER" or not isinstance(token.value, int):
            raise self._error(token, {"integer"})
        self._advance()
        if token.value < 1:
            raise SemanticError(f"LIMIT must be a positive integer, got {token.value}",
                                position=token.position)
        return token.value

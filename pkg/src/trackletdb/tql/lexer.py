"""Tokenizer for TQL.

Positions are byte offsets into the UTF-8 encoding of the input, so errors
point at the exact spot in the wire form of the query.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ParseError

KEYWORDS = frozenset({
    "SELECT", "COUNT", "FROM", "TRACKLETS", "WHERE", "AND", "OR", "NOT",
    "CONTAINS", "OVERLAPS", "ORDER", "BY", "ASC", "DESC", "LIMIT",
})

SYMBOLS = ("<=", ">=", "!=", "=", "<", ">", "(", ")", ",", "*")


@dataclass(frozen=True)
class Token:
    kind: str  # KEYWORD, IDENT, NUMBER, STRING, SYMBOL, EOF
    text: str
    position: int  # byte offset
    value: object = None


def _is_ident_start(ch: str) -> bool:
    return ch.isalpha() or ch == "_"


def _is_ident_char(ch: str) -> bool:
    return ch.isalnum() or ch == "_"


def _is_digit(ch: str) -> bool:
    # ASCII only: str.isdigit() admits characters int() rejects (e.g. '¹').
    return "0" <= ch <= "9"


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    i = 0
    byte_pos = 0
    n = len(text)

    def advance(count: int) -> None:
        nonlocal i, byte_pos
        byte_pos += len(text[i:i + count].encode("utf-8"))
        i += count

    while i < n:
        ch = text[i]
        if ch.isspace():
            advance(1)
            continue
        start = byte_pos
        if _is_ident_start(ch):
            j = i
            while j < n and _is_ident_char(text[j]):
                j += 1
            word = text[i:j]
            advance(j - i)
            upper = word.upper()
            if upper in KEYWORDS:
                tokens.append(Token("KEYWORD", upper, start))
            else:
                tokens.append(Token("IDENT", word, start))
            continue
        if _is_digit(ch) or (ch == "-" and i + 1 < n and _is_digit(text[i + 1])):
            tokens.append(_lex_number(text, i, start, advance))
            continue
        if ch == "'":
            tokens.append(_lex_string(text, i, start, advance))
            continue
        matched = False
        for symbol in SYMBOLS:
            if text.startswith(symbol, i):
                advance(len(symbol))
                tokens.append(Token("SYMBOL", symbol, start))
                matched = True
                break
        if not matched:
            raise ParseError(f"unexpected character {ch!r}", position=start,
                             expected=frozenset({"token"}))
    tokens.append(Token("EOF", "", byte_pos))
    return tokens


def _lex_number(text: str, i: int, start: int, advance) -> Token:
    j = i
    n = len(text)
    if text[j] == "-":
        j += 1
    while j < n and _is_digit(text[j]):
        j += 1
    is_float = False
    if j < n and text[j] == ".":
        is_float = True
        j += 1
        if j >= n or not _is_digit(text[j]):
            raise ParseError("malformed number", position=start,
                             expected=frozenset({"digit"}))
        while j < n and _is_digit(text[j]):
            j += 1
    if j < n and text[j] in "eE":
        k = j + 1
        if k < n and text[k] in "+-":
            k += 1
        if k < n and _is_digit(text[k]):
            is_float = True
            j = k
            while j < n and _is_digit(text[j]):
                j += 1
    word = text[i:j]
    advance(j - i)
    value = float(word) if is_float else int(word)
    return Token("NUMBER", word, start, value=value)


def _lex_string(text: str, i: int, start: int, advance) -> Token:
    # Single-quoted; an embedded quote is doubled ('').
    j = i + 1
    n = len(text)
    chunks: list[str] = []
    while True:
        if j >= n:
            raise ParseError("unterminated string literal", position=start,
                             expected=frozenset({"'"}))
        ch = text[j]
        if ch == "'":
            if j + 1 < n and text[j + 1] == "'":
                chunks.append("'")
                j += 2
                continue
            j += 1
            break
        chunks.append(ch)
        j += 1
    word = text[i:j]
    advance(j - i)
    return Token("STRING", word, start, value="".join(chunks))

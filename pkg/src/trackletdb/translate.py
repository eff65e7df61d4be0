"""Question-to-query translation.

Two interchangeable backends produce a QueryIR from a natural-language
question: a deterministic rule table for the common question shapes, and an
LLM driven by a fixed instruction template. Translation is stateless; a
backend sees only the question and the table schema, never dialogue history.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from typing import Protocol

import httpx

from .errors import MalformedReply, ParseError, UntranslatableQuestion
from .tql import (
    DESC,
    And,
    Compare,
    CountStar,
    Field,
    FieldRef,
    FuncCall,
    Literal,
    Overlaps,
    QueryIR,
    parse,
)

MANAGER_PROMPT_TEMPLATE = """Given an input question, first create a syntactically correct {dialect} query to run, then look at the results of the query and return the answer. Use the following format:

Question: "Question here"
SQLQuery: "SQL Query to run"
SQLResult: "Result of the SQLQuery"
Answer: "Final answer here"

Only use the following tables:
{table_info}

The records in the tables are in the following format:

```
ID: the primary key of the record.
Category: the category of the tracklet.
Appearance: the appearance of the tracklet.
Motion: the motion of the tracklet, described as "from t1 to t2 seconds, movements of the object".
Trajectory: the trajectory of the tracklet, described as "at t seconds, (x1, y1, x2, y2)". The velocity of the object could be obtained by calculating the distance between two positions.
Audio: the audio in this video
```

The records in the tables are randomly ordered. If the results of the SQLQuery include multiple records, you should list them separately in your answers instead of mixing them together.

Question: {input}"""

DEFAULT_DIALECT = "TQL"
DEFAULT_TABLE_INFO = ("tracklets(ID, Category, Appearance, Motion, Trajectory, "
                      "Audio)")


def build_manager_prompt(question: str, table_info: str = DEFAULT_TABLE_INFO,
                         dialect: str = DEFAULT_DIALECT) -> str:
    return MANAGER_PROMPT_TEMPLATE.format(dialect=dialect, table_info=table_info,
                                          input=question)


# --- rule-based backend ------------------------------------------------------

_NUM = r"\d+(?:\.\d+)?"
_UNIT = r"(?:s|sec|secs|second|seconds)"


def _number(text: str) -> int | float:
    return float(text) if "." in text else int(text)


def singularize(noun: str) -> str:
    """Best-effort singular form; category vocabularies are singular nouns."""
    if noun.endswith("ies") and len(noun) > 3:
        return noun[:-3] + "y"
    for suffix in ("sses", "ches", "shes", "xes", "zes"):
        if noun.endswith(suffix):
            return noun[:-2]
    if noun.endswith("s") and not noun.endswith("ss"):
        return noun[:-1]
    return noun


def _category_eq(noun: str) -> Compare:
    return Compare("=", FieldRef(Field.CATEGORY), Literal(noun))


def _rule_count(match: re.Match) -> QueryIR:
    noun = singularize(match.group("noun").strip())
    return QueryIR(projections=(CountStar(),), predicate=_category_eq(noun))


def _rule_appearance(match: re.Match) -> QueryIR:
    return QueryIR(projections=(FieldRef(Field.APPEARANCE),),
                   predicate=_category_eq(match.group("noun").strip()))


def _rule_motion(match: re.Match) -> QueryIR:
    predicate = _category_eq(match.group("noun").strip())
    if match.group("a") is not None:
        window = Overlaps(_number(match.group("a")), _number(match.group("b")))
        predicate = And(predicate, window)
    return QueryIR(projections=(FieldRef(Field.MOTION),), predicate=predicate)


def _rule_position(match: re.Match) -> QueryIR:
    t = _number(match.group("t"))
    return QueryIR(projections=(FuncCall("position_at", (t,)),),
                   predicate=_category_eq(match.group("noun").strip()))


def _rule_fastest(match: re.Match) -> QueryIR:
    return QueryIR(projections=(FieldRef(Field.ID), FieldRef(Field.CATEGORY)),
                   order_by=(FuncCall("avg_velocity"), DESC), limit=1)


def _rule_audio(match: re.Match) -> QueryIR:
    return QueryIR(projections=(FieldRef(Field.AUDIO),),
                   predicate=Compare("=", FieldRef(Field.ID), Literal(0)))


RULE_TABLE: tuple[tuple[re.Pattern, object], ...] = (
    (re.compile(r"^how many (?P<noun>.+?) (?:are|is) there\b.*$"), _rule_count),
    (re.compile(r"^what does the (?P<noun>.+?) look like$"), _rule_appearance),
    (re.compile(r"^what is the (?P<noun>.+?) doing"
                rf"(?: from (?P<a>{_NUM}) to (?P<b>{_NUM}) {_UNIT})?$"),
     _rule_motion),
    (re.compile(rf"^where is the (?P<noun>.+?) at (?P<t>{_NUM}) {_UNIT}$"),
     _rule_position),
    (re.compile(r"^which (?P<noun>.+?) is (?:the )?fastest$"), _rule_fastest),
    (re.compile(r"^what (?:sound|audio)\b.*$"), _rule_audio),
    (re.compile(r"^what (?:is|are) (?:they|he|she|it|the .+?) saying$"),
     _rule_audio),
)


def normalize_question(question: str) -> str:
    text = question.strip().lower()
    text = re.sub(r"[?.!]+$", "", text)
    return re.sub(r"\s+", " ", text).strip()


def translate_rule_based(question: str) -> QueryIR:
    """Match the question against the pattern table; no LLM involved."""
    normalized = normalize_question(question)
    for pattern, build in RULE_TABLE:
        match = pattern.match(normalized)
        if match:
            return build(match)
    raise UntranslatableQuestion(question)


# --- LLM backend -------------------------------------------------------------

class LLMClient(Protocol):
    def call(self, request: dict) -> dict: ...


def parse_llm_reply(reply: str) -> QueryIR:
    """Extract the first SQLQuery line and parse it as TQL."""
    for line in reply.splitlines():
        stripped = line.strip()
        if not stripped.lower().startswith("sqlquery:"):
            continue
        query = stripped[len("sqlquery:"):].strip()
        if len(query) >= 2 and query[0] == query[-1] and query[0] in "\"'":
            query = query[1:-1]
        try:
            return parse(query)
        except ParseError as exc:
            exc.raw_line = stripped
            raise
    raise MalformedReply("reply contains no SQLQuery line")


def prompt_key(prompt: str) -> str:
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()


@dataclass
class ScriptedLLMClient:
    """Canned replies keyed by sha256 of the full prompt; offline test double."""

    replies: dict[str, str] = field(default_factory=dict)

    @classmethod
    def from_file(cls, path) -> "ScriptedLLMClient":
        with open(path, encoding="utf-8") as handle:
            return cls(json.load(handle))

    def add(self, prompt: str, reply: str) -> None:
        self.replies[prompt_key(prompt)] = reply

    def call(self, request: dict) -> dict:
        key = prompt_key(request["prompt"])
        if key not in self.replies:
            raise LookupError(f"no scripted reply for prompt hash {key[:12]}")
        return {"text": self.replies[key]}


@dataclass
class HttpLLMClient:
    endpoint: str
    timeout_s: float = 30.0

    def call(self, request: dict) -> dict:
        response = httpx.post(self.endpoint, json=request, timeout=self.timeout_s)
        response.raise_for_status()
        return response.json()


@dataclass(frozen=True)
class RuleBasedBackend:
    name: str = "rule_based"

    def translate(self, question: str) -> QueryIR:
        return translate_rule_based(question)


@dataclass
class LLMBackend:
    client: LLMClient
    table_info: str = DEFAULT_TABLE_INFO
    dialect: str = DEFAULT_DIALECT
    max_tokens: int = 256
    name: str = "llm"

    def translate(self, question: str) -> QueryIR:
        prompt = build_manager_prompt(question, self.table_info, self.dialect)
        response = self.client.call({"prompt": prompt, "max_tokens": self.max_tokens})
        text = response.get("text")
        if not isinstance(text, str):
            raise MalformedReply("LLM response has no text")
        return parse_llm_reply(text)


def translate(question: str, backends) -> tuple[QueryIR, str]:
    """Try each backend in order; report every failure if none succeeds."""
    if not backends:
        raise UntranslatableQuestion(question, causes=[])
    causes = []
    for backend in backends:
        try:
            return backend.translate(question), backend.name
        except Exception as exc:  # noqa: BLE001 - aggregated into the final error
            causes.append((backend.name, exc))
    raise UntranslatableQuestion(question, causes=causes)

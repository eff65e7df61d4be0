"""Conversation orchestration over one video's tracklet database.

Each turn runs question -> query -> retrieval -> answer. Failures surface as
answers rather than exceptions: a chat surface must always respond, and the
turn is recorded either way so history length always equals the number of
questions asked.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .errors import EvaluationError, InvalidArgument, UntranslatableQuestion
from .model import TrackletDatabase
from .tql import Compare, Field, FieldRef, Literal, QueryIR, ResultSet, evaluate, pretty_print
from .translate import translate

APOLOGY = ("I am sorry, I cannot turn that question into a query. I can answer "
           "questions like: how many objects of a category there are, what "
           "something looks like, what something is doing, where something is "
           "at a given time, which object is the fastest, and what the audio "
           "is.")

NOT_FOUND_ANSWER = "I could not find anything matching that in this video."


@dataclass(frozen=True)
class Turn:
    """One completed exchange: question, how it was answered, and the answer."""

    question: str
    answer: str
    query: Optional[QueryIR] = None
    result: Optional[ResultSet] = None
    backend: Optional[str] = None
    error_kind: Optional[str] = None

    def __post_init__(self):
        if not self.answer:
            raise InvalidArgument("turn answer must be non-empty")

    @property
    def query_text(self) -> Optional[str]:
        return None if self.query is None else pretty_print(self.query)


@dataclass
class Session:
    """Dialogue history for one video; turns are append-only and ordered."""

    session_id: str
    video_id: str
    history: list[Turn] = field(default_factory=list)


Synthesizer = Callable[[str, ResultSet, Sequence[Turn]], str]


def ask(session: Session, question: str, db: TrackletDatabase, translator,
        synthesizer: Optional[Synthesizer] = None, *,
        trajectory_stride_s: float = 1.0) -> Turn:
    """Answer one question, append the turn to the session, and return it.

    translator is the ordered backend list from the translate module; it
    receives only the question, never the session history.
    """
    if session.video_id != db.video.video_id:
        raise InvalidArgument(
            f"session is bound to video {session.video_id!r}, "
            f"not {db.video.video_id!r}")
    if synthesizer is None:
        synthesizer = lambda q, result, history: synthesize_answer_template(q, result)

    try:
        ir, backend = translate(question, translator)
    except UntranslatableQuestion:
        turn = Turn(question=question, answer=APOLOGY,
                    error_kind="untranslatable-question")
        session.history.append(turn)
        return turn

    try:
        result = evaluate(ir, db, trajectory_stride_s=trajectory_stride_s)
    except EvaluationError as exc:
        turn = Turn(question=question,
                    answer=f"I could not evaluate that question: {exc}.",
                    query=ir, backend=backend, error_kind="evaluation-error")
        session.history.append(turn)
        return turn

    answer = synthesizer(question, result, tuple(session.history))
    turn = Turn(question=question, answer=answer, query=ir, result=result,
                backend=backend)
    session.history.append(turn)
    return turn


def _count_category(query: Optional[QueryIR]) -> Optional[str]:
    # A lone Category = 'x' equality gives the COUNT sentence its noun.
    if query is None or query.predicate is None:
        return None
    found: list[str] = []

    def walk(node) -> None:
        if isinstance(node, Compare) and node.op == "=":
            for one, other in ((node.lhs, node.rhs), (node.rhs, node.lhs)):
                if (isinstance(one, FieldRef) and one.field is Field.CATEGORY
                        and isinstance(other, Literal)
                        and isinstance(other.value, str)):
                    found.append(other.value)
        for child in ("lhs", "rhs", "operand"):
            if hasattr(node, child):
                walk(getattr(node, child))

    walk(query.predicate)
    if len(found) == 1:
        return found[0]
    return None


def _cell_text(cell) -> str:
    if cell is None:
        return "N/A"
    if isinstance(cell, str):
        return cell
    if isinstance(cell, float):
        return repr(cell)
    return str(cell)


def _sentence(text: str) -> str:
    return text if text.endswith(".") else text + "."


def synthesize_answer_template(question: str, result: ResultSet) -> str:
    """Deterministic answer from the result rows alone."""
    if result.query.is_count:
        count = result.rows[0][0]
        category = _count_category(result.query)
        if category is None:
            noun = "matching tracklet" if count == 1 else "matching tracklets"
        else:
            noun = category if count == 1 else category + "s"
        verb = "is" if count == 1 else "are"
        return f"There {verb} {count} {noun} in this video."
    if result.is_empty:
        return NOT_FOUND_ANSWER
    sentences = []
    for row, record_id, category in zip(result.rows, result.record_ids,
                                        result.categories):
        body = "; ".join(_cell_text(cell) for cell in row)
        if len(result.rows) > 1:
            sentences.append(_sentence(f"Tracklet {record_id} ({category}): {body}"))
        else:
            sentences.append(_sentence(body))
    return " ".join(sentences)


def build_answer_prompt(question: str, result: ResultSet,
                        history: Sequence[Turn]) -> str:
    """Prompt for LLM answer polishing: history pairs, rows, then the question."""
    lines = ["You are answering questions about one video using query results.",
             ""]
    for turn in history:
        lines.append(f"Question: {turn.question}")
        lines.append(f"Answer: {turn.answer}")
    if history:
        lines.append("")
    lines.append(f"Question: {question}")
    lines.append(f"Columns: {', '.join(result.columns)}")
    for row, record_id in zip(result.rows, result.record_ids):
        rendered = "; ".join(_cell_text(cell) for cell in row)
        prefix = "Row" if record_id is None else f"Row (tracklet {record_id})"
        lines.append(f"{prefix}: {rendered}")
    lines.append("Answer the question in one short paragraph, listing each "
                 "row separately.")
    return "\n".join(lines)


def synthesize_answer_llm(question: str, result: ResultSet,
                          history: Sequence[Turn], client,
                          max_tokens: int = 256) -> str:
    """LLM-phrased answer; falls back to the template on any client failure."""
    prompt = build_answer_prompt(question, result, history)
    try:
        response = client.call({"prompt": prompt, "max_tokens": max_tokens})
        text = response.get("text")
        if isinstance(text, str) and text.strip():
            return text.strip()
    except Exception:  # noqa: BLE001 - fallback is the contract
        pass
    return synthesize_answer_template(question, result)


def llm_synthesizer(client, max_tokens: int = 256) -> Synthesizer:
    """Adapt an LLM client to the synthesizer signature used by ask()."""

    def synthesize(question: str, result: ResultSet,
                   history: Sequence[Turn]) -> str:
        return synthesize_answer_llm(question, result, history, client,
                                     max_tokens)

    return synthesize

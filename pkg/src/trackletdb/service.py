"""The REST surface: versioned JSON API binding ingest, store, query, and chat.

All routes live under /v1. Requests reject unknown fields; error responses
share one shape: {"error": {"kind": ..., "message": ..., ...}}.
"""

from __future__ import annotations

import itertools
import re
import threading
from dataclasses import dataclass, field as dataclass_field
from pathlib import Path
from typing import Any, Optional, Union

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, ConfigDict

from . import chat, store, translate
from .annotators import AnnotatorSuite
from .errors import (
    AnnotationError,
    CorruptDatabase,
    EvaluationError,
    InvalidArgument,
    MalformedInput,
    NotFound,
    ParseError,
    SemanticError,
    TrackletDBError,
    UnsupportedVersion,
)
from .ingest import IngestConfig, build_database, parse_detections
from .model import TrackletDatabase, VideoMeta
from .tql import ResultSet, evaluate, parse, pretty_print

API_PREFIX = "/v1"

_VIDEO_ID = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._-]*$")


@dataclass(frozen=True)
class ServiceConfig:
    """Startup configuration; the CLI flags mirror these fields."""

    host: str = "127.0.0.1"
    port: int = 8420
    data_dir: Path = Path("data")
    ingest: IngestConfig = IngestConfig()
    translator_order: tuple[str, ...] = ("rule_based",)
    llm_endpoint: Optional[str] = None
    llm_replies_file: Optional[str] = None
    max_ingest_workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "data_dir", Path(self.data_dir))
        if "rule_based" not in self.translator_order:
            raise InvalidArgument("translator order must include rule_based")
        for name in self.translator_order:
            if name not in ("rule_based", "llm"):
                raise InvalidArgument(f"unknown translator backend {name!r}")
        if "llm" in self.translator_order and not (
                self.llm_endpoint or self.llm_replies_file):
            raise InvalidArgument("llm backend requires an endpoint or replies file")

    def build_translator(self) -> list:
        backends = []
        for name in self.translator_order:
            if name == "rule_based":
                backends.append(translate.RuleBasedBackend())
            else:
                if self.llm_replies_file:
                    client = translate.ScriptedLLMClient.from_file(self.llm_replies_file)
                else:
                    client = translate.HttpLLMClient(self.llm_endpoint)
                backends.append(translate.LLMBackend(client))
        return backends


# --- request bodies ----------------------------------------------------------

class _Body(BaseModel):
    model_config = ConfigDict(extra="forbid")


class VideoDocument(_Body):
    video_id: str
    path: str
    fps: float
    width: int
    height: int
    num_frames: int
    duration_s: float


class IngestSettings(_Body):
    segment_len_frames: int = 32
    min_tail_frames: int = 8
    always_asr: bool = True
    trajectory_render_stride_s: float = 1.0


class IngestRequest(_Body):
    video: VideoDocument
    detections: str
    annotators: Union[str, dict] = "synthetic"
    config: Optional[IngestSettings] = None


class QueryRequest(_Body):
    query: str


class SessionRequest(_Body):
    video_id: str


class MessageRequest(_Body):
    question: str


# --- error mapping -----------------------------------------------------------

def _error_payload(kind: str, message: str, **extra: Any) -> dict:
    doc = {"kind": kind, "message": message}
    doc.update({key: value for key, value in extra.items() if value is not None})
    return {"error": doc}


def _error_response(status: int, kind: str, message: str, **extra: Any) -> JSONResponse:
    return JSONResponse(status_code=status, content=_error_payload(kind, message, **extra))


def _handle_domain_error(request: Request, exc: TrackletDBError) -> JSONResponse:
    if isinstance(exc, ParseError):
        expected = sorted(exc.expected) if exc.expected else None
        return _error_response(400, "parse-error", str(exc), position=exc.position,
                               expected=expected, raw_line=getattr(exc, "raw_line", None))
    if isinstance(exc, SemanticError):
        return _error_response(400, "semantic-error", str(exc), name=exc.name,
                               position=exc.position)
    if isinstance(exc, MalformedInput):
        return _error_response(400, "malformed-input", str(exc),
                               byte_offset=exc.byte_offset)
    if isinstance(exc, NotFound):
        return _error_response(404, "not-found", str(exc))
    if isinstance(exc, AnnotationError):
        return _error_response(502, "annotation-error", str(exc), stage=exc.stage)
    if isinstance(exc, EvaluationError):
        return _error_response(400, "evaluation-error", str(exc))
    if isinstance(exc, UnsupportedVersion):
        return _error_response(400, "unsupported-version", str(exc))
    if isinstance(exc, CorruptDatabase):
        return _error_response(400, "corrupt-database", str(exc),
                               invariant=exc.invariant)
    if isinstance(exc, InvalidArgument):
        return _error_response(400, "invalid-argument", str(exc),
                               invariant=exc.invariant)
    return _error_response(400, "invalid-request", str(exc))


def _handle_validation_error(request: Request, exc: RequestValidationError) -> JSONResponse:
    return _error_response(400, "invalid-request", str(exc.errors()[:3]))


# --- app state ---------------------------------------------------------------

@dataclass
class _SessionBox:
    session: chat.Session
    lock: threading.Lock = dataclass_field(default_factory=threading.Lock)


class ServiceState:
    def __init__(self, config: ServiceConfig):
        self.config = config
        self.store = store.StoreHandle()
        self.translator = config.build_translator()
        self.sessions: dict[str, _SessionBox] = {}
        self._session_counter = itertools.count(1)
        self._sessions_lock = threading.Lock()

    def new_session(self, video_id: str) -> chat.Session:
        with self._sessions_lock:
            session_id = f"s{next(self._session_counter)}"
            box = _SessionBox(chat.Session(session_id=session_id, video_id=video_id))
            self.sessions[session_id] = box
        return box.session

    def session_box(self, session_id: str) -> _SessionBox:
        try:
            return self.sessions[session_id]
        except KeyError:
            raise NotFound(f"unknown session {session_id!r}") from None

    def database_path(self, video_id: str) -> Path:
        return self.config.data_dir / f"{video_id}.tracklets.json"


def _turn_document(turn: chat.Turn) -> dict:
    doc: dict[str, Any] = {
        "question": turn.question,
        "answer": turn.answer,
        "query": turn.query_text,
        "backend": turn.backend,
        "error": None if turn.error_kind is None else {"kind": turn.error_kind},
    }
    if turn.result is not None:
        doc.update(_result_document(turn.result))
    else:
        doc.update({"columns": [], "rows": [], "record_ids": []})
    return doc


def _result_document(result: ResultSet) -> dict:
    return {
        "columns": list(result.columns),
        "rows": [list(row) for row in result.rows],
        "record_ids": list(result.record_ids),
    }


def create_app(config: ServiceConfig = ServiceConfig(), *,
               preload: bool = True) -> FastAPI:
    """Build the service; loads previously saved databases from data_dir."""
    config.data_dir.mkdir(parents=True, exist_ok=True)
    probe = config.data_dir / ".writable"
    probe.write_bytes(b"")
    probe.unlink()

    state = ServiceState(config)
    if preload:
        for path in sorted(config.data_dir.glob("*.tracklets.json")):
            state.store.register(store.load(path))

    app = FastAPI(title="trackletdb", version="1")
    app.state.service = state
    app.add_exception_handler(TrackletDBError, _handle_domain_error)
    app.add_exception_handler(RequestValidationError, _handle_validation_error)

    @app.post(f"{API_PREFIX}/videos", status_code=201)
    def ingest_video(request: IngestRequest) -> dict:
        if not _VIDEO_ID.match(request.video.video_id):
            raise InvalidArgument(
                f"video_id must match {_VIDEO_ID.pattern}, got {request.video.video_id!r}")
        video = VideoMeta(**request.video.model_dump())
        detections = parse_detections(request.detections)
        suite = AnnotatorSuite.from_spec(request.annotators)
        settings = request.config or IngestSettings()
        ingest_config = IngestConfig(**settings.model_dump())
        db = build_database(video, detections, suite, ingest_config,
                            max_workers=config.max_ingest_workers)
        store.save(db, state.database_path(video.video_id))
        state.store.register(db)
        return {"video_id": video.video_id, "num_records": len(db.records)}

    @app.get(f"{API_PREFIX}/videos/{{video_id}}/tracklets")
    def get_tracklets(video_id: str) -> dict:
        return store.database_to_document(state.store.get(video_id))

    @app.post(f"{API_PREFIX}/videos/{{video_id}}/query")
    def run_query(video_id: str, request: QueryRequest) -> dict:
        db = state.store.get(video_id)
        ir = parse(request.query)
        result = evaluate(
            ir, db, trajectory_stride_s=config.ingest.trajectory_render_stride_s)
        return {"query": pretty_print(ir), **_result_document(result)}

    @app.post(f"{API_PREFIX}/sessions", status_code=201)
    def create_session(request: SessionRequest) -> dict:
        if request.video_id not in state.store:
            raise NotFound(f"unknown video {request.video_id!r}")
        session = state.new_session(request.video_id)
        return {"session_id": session.session_id, "video_id": session.video_id}

    @app.post(f"{API_PREFIX}/sessions/{{session_id}}/messages")
    def post_message(session_id: str, request: MessageRequest) -> dict:
        box = state.session_box(session_id)
        db: TrackletDatabase = state.store.get(box.session.video_id)
        with box.lock:
            turn = chat.ask(
                box.session, request.question, db, state.translator,
                trajectory_stride_s=config.ingest.trajectory_render_stride_s)
        return _turn_document(turn)

    @app.get(f"{API_PREFIX}/sessions/{{session_id}}/history")
    def get_history(session_id: str) -> dict:
        box = state.session_box(session_id)
        with box.lock:
            turns = [_turn_document(turn) for turn in box.session.history]
        return {"session_id": session_id,
                "video_id": box.session.video_id,
                "turns": turns}

    return app

"""trackletdb: a tracklet-centric video database you can query and chat with.

Videos are ingested into per-object tracklet records (category, appearance,
motion captions, trajectory, audio) via pluggable annotator clients, stored
as canonical JSON, queried with the small declarative TQL language, and
exposed through natural-language chat, a REST service, and a CLI.
"""

from .annotators import AnnotatorSuite, ScriptedAnnotator, SyntheticAnnotator
from .chat import Session, Turn, ask, synthesize_answer_llm, synthesize_answer_template
from .errors import (
    AnnotationError,
    CorruptDatabase,
    EvaluationError,
    InvalidArgument,
    MalformedInput,
    MalformedReply,
    NotFound,
    ParseError,
    SemanticError,
    TrackletDBError,
    UnsupportedVersion,
    UntranslatableQuestion,
)
from .ingest import (
    IngestConfig,
    RawDetection,
    build_database,
    build_prompts,
    group_tracks,
    parse_detections,
    segment_tracklet,
)
from .model import (
    ENVIRONMENT_CATEGORY,
    ENVIRONMENT_ID,
    AudioAnnotation,
    BoundingBox,
    MotionSegment,
    RegionRef,
    TrackletDatabase,
    TrackletRecord,
    TrajectoryPoint,
    VideoMeta,
    frame_timestamp,
    keyframe_score,
    select_keyframe,
)
from .service import ServiceConfig, create_app
from .store import StoreHandle, load, loads, save
from .tql import QueryIR, ResultSet, evaluate, parse, pretty_print
from .translate import (
    LLMBackend,
    RuleBasedBackend,
    build_manager_prompt,
    parse_llm_reply,
    translate,
    translate_rule_based,
)

__version__ = "0.1.0"

__all__ = [
    "ENVIRONMENT_CATEGORY",
    "ENVIRONMENT_ID",
    "AnnotationError",
    "AnnotatorSuite",
    "AudioAnnotation",
    "BoundingBox",
    "CorruptDatabase",
    "EvaluationError",
    "IngestConfig",
    "InvalidArgument",
    "LLMBackend",
    "MalformedInput",
    "MalformedReply",
    "MotionSegment",
    "NotFound",
    "ParseError",
    "QueryIR",
    "RawDetection",
    "RegionRef",
    "ResultSet",
    "RuleBasedBackend",
    "ScriptedAnnotator",
    "SemanticError",
    "ServiceConfig",
    "Session",
    "StoreHandle",
    "SyntheticAnnotator",
    "TrackletDBError",
    "TrackletDatabase",
    "TrackletRecord",
    "TrajectoryPoint",
    "Turn",
    "UnsupportedVersion",
    "UntranslatableQuestion",
    "VideoMeta",
    "ask",
    "build_database",
    "build_manager_prompt",
    "build_prompts",
    "create_app",
    "evaluate",
    "frame_timestamp",
    "group_tracks",
    "keyframe_score",
    "load",
    "loads",
    "parse",
    "parse_detections",
    "parse_llm_reply",
    "pretty_print",
    "save",
    "segment_tracklet",
    "select_keyframe",
    "synthesize_answer_llm",
    "synthesize_answer_template",
    "translate",
    "translate_rule_based",
]

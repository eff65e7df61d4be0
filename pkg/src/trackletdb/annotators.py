"""Annotator clients speaking the JSON wire protocol, plus deterministic stand-ins.

Every client receives one UTF-8 JSON request object and returns one JSON
response object. Caption requests carry a prompt and a region or segment
reference; audio requests carry only the video id. Real model servers and
the scripted/synthetic stand-ins used in tests implement the same protocol.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any, Protocol

from .errors import AnnotationError, InvalidArgument
from .model import RegionRef

CAPTION_STAGES = ("image_captioner", "video_captioner")
AUDIO_STAGES = ("audio_classifier", "asr", "emotion_classifier")
ALL_STAGES = ("detector_tracker",) + CAPTION_STAGES + AUDIO_STAGES


class AnnotatorClient(Protocol):
    def call(self, request: dict[str, Any]) -> dict[str, Any]: ...


def _bbox_payload(bbox) -> list[float] | None:
    if bbox is None:
        return None
    return [int(v) if float(v).is_integer() else float(v) for v in bbox.as_tuple()]


@dataclass
class AnnotatorSuite:
    """The pluggable set of clients feeding ingestion.

    Any client may be None (stage unavailable) or a deterministic stand-in.
    The typed helpers below build protocol requests and unwrap responses,
    translating client failures into AnnotationError naming the stage.
    """

    detector_tracker: AnnotatorClient | None = None
    image_captioner: AnnotatorClient | None = None
    video_captioner: AnnotatorClient | None = None
    audio_classifier: AnnotatorClient | None = None
    asr: AnnotatorClient | None = None
    emotion_classifier: AnnotatorClient | None = None

    def image_caption(self, region: RegionRef, prompt: str) -> str:
        request = {
            "kind": "image_caption",
            "video_id": region.video_id,
            "frame": region.frame_index,
            "bbox": _bbox_payload(region.bbox),
            "prompt": prompt,
        }
        return self._call("image_captioner", request, "text")

    def video_caption(self, video_id: str, start_frame: int, end_frame: int,
                      bbox, prompt: str) -> str:
        request = {
            "kind": "video_caption",
            "video_id": video_id,
            "start_frame": start_frame,
            "end_frame": end_frame,
            "bbox": _bbox_payload(bbox),
            "prompt": prompt,
        }
        return self._call("video_captioner", request, "text")

    def audio_classify(self, video_id: str) -> str:
        return self._call("audio_classifier", {"kind": "audio_classify", "video_id": video_id}, "label")

    def transcribe(self, video_id: str) -> str:
        return self._call("asr", {"kind": "asr", "video_id": video_id}, "text")

    def classify_emotion(self, video_id: str) -> str:
        return self._call("emotion_classifier", {"kind": "emotion", "video_id": video_id}, "label")

    @property
    def has_audio_pipeline(self) -> bool:
        return self.audio_classifier is not None

    def _call(self, stage: str, request: dict[str, Any], response_key: str) -> str:
        client = getattr(self, stage)
        if client is None:
            raise AnnotationError(stage, "no client configured")
        try:
            response = client.call(request)
        except AnnotationError:
            raise
        except Exception as exc:
            raise AnnotationError(stage, str(exc)) from exc
        if not isinstance(response, dict) or response_key not in response:
            raise AnnotationError(stage, f"response missing {response_key!r}: {response!r}")
        return str(response[response_key])

    @classmethod
    def synthetic(cls) -> "AnnotatorSuite":
        """A full suite of generic deterministic stand-ins."""
        synth = SyntheticAnnotator()
        return cls(image_captioner=synth, video_captioner=synth,
                   audio_classifier=synth, asr=synth, emotion_classifier=synth)

    @classmethod
    def scripted(cls, rules_by_stage: dict[str, list[dict[str, Any]]]) -> "AnnotatorSuite":
        """A suite of ScriptedAnnotators built from per-stage rule lists."""
        unknown = set(rules_by_stage) - set(ALL_STAGES)
        if unknown:
            raise InvalidArgument(f"unknown annotator stages: {sorted(unknown)}")
        clients = {stage: ScriptedAnnotator.from_rules(rules)
                   for stage, rules in rules_by_stage.items()}
        return cls(**clients)

    @classmethod
    def from_endpoints(cls, endpoints: dict[str, str]) -> "AnnotatorSuite":
        unknown = set(endpoints) - set(ALL_STAGES)
        if unknown:
            raise InvalidArgument(f"unknown annotator stages: {sorted(unknown)}")
        return cls(**{stage: HttpAnnotator(url) for stage, url in endpoints.items()})

    @classmethod
    def from_spec(cls, spec: Any) -> "AnnotatorSuite":
        """Build a suite from a request/config value.

        Accepts the string "synthetic", {"scripted": {stage: [rules]}}, or
        {"endpoints": {stage: url}}.
        """
        if spec == "synthetic":
            return cls.synthetic()
        if isinstance(spec, dict):
            if set(spec) == {"scripted"}:
                return cls.scripted(spec["scripted"])
            if set(spec) == {"endpoints"}:
                return cls.from_endpoints(spec["endpoints"])
        raise InvalidArgument(f"unrecognized annotators spec: {spec!r}")


class ScriptedAnnotator:
    """Replays canned responses: first rule whose match fields all equal the request wins."""

    def __init__(self, rules: list[tuple[dict[str, Any], dict[str, Any]]],
                 default: dict[str, Any] | None = None):
        self._rules = list(rules)
        self._default = default

    @classmethod
    def from_rules(cls, rules: list[dict[str, Any]]) -> "ScriptedAnnotator":
        """Build from JSON rules: [{"match": {...}, "response": {...}}, ...].

        A rule with an empty match is a catch-all.
        """
        pairs = []
        default = None
        for rule in rules:
            match = rule.get("match", {})
            response = rule["response"]
            if match:
                pairs.append((match, response))
            else:
                default = response
        return cls(pairs, default=default)

    def call(self, request: dict[str, Any]) -> dict[str, Any]:
        for match, response in self._rules:
            if all(request.get(key) == value for key, value in match.items()):
                return dict(response)
        if self._default is not None:
            return dict(self._default)
        raise LookupError(f"no scripted response for request {request!r}")


_PROMPT_CATEGORY = re.compile(r"The (?P<category>.+)$")


class SyntheticAnnotator:
    """Generic deterministic stand-in: replies derived only from the request."""

    def call(self, request: dict[str, Any]) -> dict[str, Any]:
        kind = request.get("kind")
        if kind == "image_caption":
            return {"text": f"a plain {self._category(request)}"}
        if kind == "video_caption":
            return {"text": f"the {self._category(request)} is moving"}
        if kind == "audio_classify":
            return {"label": "speech"}
        if kind == "asr":
            return {"text": "synthetic transcript"}
        if kind == "emotion":
            return {"label": "neutral"}
        raise LookupError(f"unknown request kind {kind!r}")

    @staticmethod
    def _category(request: dict[str, Any]) -> str:
        match = _PROMPT_CATEGORY.search(request.get("prompt", ""))
        return match.group("category") if match else "object"


@dataclass
class HttpAnnotator:
    """Posts protocol requests as JSON to a model-server endpoint."""

    endpoint: str
    timeout_s: float = 30.0
    _client: Any = field(default=None, repr=False)

    def call(self, request: dict[str, Any]) -> dict[str, Any]:
        import httpx

        client = self._client
        if client is None:
            response = httpx.post(self.endpoint, json=request, timeout=self.timeout_s)
        else:
            response = client.post(self.endpoint, json=request, timeout=self.timeout_s)
        response.raise_for_status()
        return response.json()

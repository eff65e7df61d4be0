"""Two small fully offline videos with scripted annotator replies.

These drive the golden tests, the CLI quickstart, and the demo service. The
detections are synthesized from closed-form tracks, so ingestion is exactly
reproducible; the scripted caption rules key on the prompt text, which embeds
the category.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .annotators import AnnotatorSuite
from .ingest import IngestConfig, RawDetection, build_database, render_detections
from .model import BoundingBox, TrackletDatabase, VideoMeta


@dataclass(frozen=True)
class Fixture:
    """One reproducible video: metadata, detections, and canned annotators."""

    video: VideoMeta
    detections: tuple[RawDetection, ...]
    scripted_rules: dict
    config: IngestConfig = IngestConfig()

    def suite(self) -> AnnotatorSuite:
        return AnnotatorSuite.scripted(self.scripted_rules)

    def detections_ndjson(self) -> str:
        return render_detections(self.detections)

    def build(self, max_workers: int = 1) -> TrackletDatabase:
        return build_database(self.video, self.detections, self.suite(),
                              self.config, max_workers=max_workers)

    def video_document(self) -> dict:
        return {
            "video_id": self.video.video_id,
            "path": self.video.path,
            "fps": self.video.fps,
            "width": self.video.width,
            "height": self.video.height,
            "num_frames": self.video.num_frames,
            "duration_s": self.video.duration_s,
        }


def _track(track_id: int, category: str, frames: range, x1: float, y1: float,
           x2: float, y2: float, dx: float = 0.0,
           confidence: float = 0.9) -> list[RawDetection]:
    return [
        RawDetection(frame_index=frame, track_id=track_id, category=category,
                     bbox=BoundingBox(x1 + dx * frame, y1, x2 + dx * frame, y2),
                     confidence=confidence)
        for frame in frames
    ]


def _image_rule(category: str, text: str) -> dict:
    return {"match": {"kind": "image_caption",
                      "prompt": f"What does the {category} look like? The {category}"},
            "response": {"text": text}}


def _video_rule(category: str, text: str) -> dict:
    return {"match": {"kind": "video_caption",
                      "prompt": f"What is the {category} doing? The {category}"},
            "response": {"text": text}}


def motorcycle_fixture() -> Fixture:
    """A motorcyclist riding through mountains; two moving tracks, engine audio."""
    video = VideoMeta(video_id="motorcycle", path="motorcycle.mp4", fps=5,
                      width=640, height=360, num_frames=35, duration_s=7.0)
    detections = (
        _track(1, "motorcycle", range(35), 198, 198, 294, 277, dx=2)
        + _track(2, "person", range(35), 222, 176, 279, 259, dx=2)
    )
    rules = {
        "image_captioner": [
            _image_rule("environment", "road and mountains"),
            _image_rule("motorcycle", "orange in color"),
            _image_rule("person", "wearing a black leather jacket and a black helmet"),
        ],
        "video_captioner": [
            _video_rule("environment", "a motorcyclist riding on the road in the mountains"),
            _video_rule("motorcycle", "a man riding a motorcycle down a road"),
            _video_rule("person", "the person is a motorcyclist on a motorcycle in the mountains"),
        ],
        "audio_classifier": [{"match": {}, "response": {"label": "engine"}}],
        "asr": [{"match": {}, "response": {"text": ""}}],
        "emotion_classifier": [{"match": {}, "response": {"label": "neutral"}}],
    }
    return Fixture(video=video, detections=tuple(detections), scripted_rules=rules)


def classroom_fixture() -> Fixture:
    """A woman in a classroom with a laptop and a tv; speech audio."""
    video = VideoMeta(video_id="classroom", path="classroom.mp4", fps=30,
                      width=640, height=360, num_frames=60, duration_s=2.0)
    detections = (
        _track(1, "laptop", range(60), 181, 236, 289, 300)
        + _track(2, "person", range(60), 122, 159, 225, 289)
        + _track(3, "tv", range(35), 338, 133, 406, 181)
    )
    rules = {
        "image_captioner": [
            _image_rule("environment", "a classroom"),
            _image_rule("laptop", "laptop black and silver in color"),
            _image_rule("person", "person long hair and green T-shirt"),
            _image_rule("tv", "tv black screen"),
        ],
        "video_captioner": [
            _video_rule("environment", "a woman is sitting in the room"),
            _video_rule("laptop", "a person is working on a laptop"),
            _video_rule("person", "the person is a woman in the classroom"),
            _video_rule("tv", "the tv is on a black background"),
        ],
        "audio_classifier": [{"match": {}, "response": {"label": "speech"}}],
        "asr": [{"match": {}, "response": {"text": "today we are going to review the last lesson"}}],
        "emotion_classifier": [{"match": {}, "response": {"label": "neutral"}}],
    }
    return Fixture(video=video, detections=tuple(detections), scripted_rules=rules)


FIXTURES = {
    "motorcycle": motorcycle_fixture,
    "classroom": classroom_fixture,
}


def write_fixture_files(fixture: Fixture, dest: str | Path) -> dict[str, Path]:
    """Write video/detections/annotators files for the CLI quickstart."""
    dest = Path(dest)
    dest.mkdir(parents=True, exist_ok=True)
    name = fixture.video.video_id
    paths = {
        "video": dest / f"{name}.video.json",
        "detections": dest / f"{name}.detections.ndjson",
        "annotators": dest / f"{name}.annotators.json",
    }
    paths["video"].write_text(
        json.dumps(fixture.video_document(), indent=2) + "\n", encoding="utf-8")
    paths["detections"].write_text(fixture.detections_ndjson(), encoding="utf-8")
    paths["annotators"].write_text(
        json.dumps({"scripted": fixture.scripted_rules}, indent=2) + "\n",
        encoding="utf-8")
    return paths


def main(argv: list[str] | None = None) -> int:
    import argparse

    parser = argparse.ArgumentParser(
        description="Write the bundled demo fixtures as ingestable files.")
    parser.add_argument("dest", help="output directory")
    parser.add_argument("--fixture", choices=sorted(FIXTURES), action="append",
                        help="fixture name (default: all)")
    args = parser.parse_args(argv)
    names = args.fixture or sorted(FIXTURES)
    for name in names:
        for label, path in write_fixture_files(FIXTURES[name](), args.dest).items():
            print(f"{name} {label}: {path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

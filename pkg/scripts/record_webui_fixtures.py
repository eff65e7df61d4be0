"""Record real service responses as JSON fixtures for the web client tests.

Runs the service in-process against the bundled demo videos and captures the
exact wire payloads the frontend consumes. Re-run after changing the service
or the fixtures:

    python3 scripts/record_webui_fixtures.py
"""

import json
import sys
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from trackletdb.fixtures import classroom_fixture, motorcycle_fixture
from trackletdb.service import ServiceConfig, create_app

DEST = Path(__file__).resolve().parent.parent / "frontend" / "tests" / "fixtures"

CHAT_QUESTIONS = [
    "How many persons are there in this video?",
    "What does the motorcycle look like?",
    "Why is the sky blue?",
]


def write(name: str, payload) -> None:
    path = DEST / name
    path.write_text(json.dumps(payload, indent=2, ensure_ascii=False) + "\n",
                    encoding="utf-8")
    print(f"wrote {path}")


def main() -> int:
    DEST.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        client = TestClient(create_app(ServiceConfig(data_dir=Path(tmp))))
        for fixture in (motorcycle_fixture(), classroom_fixture()):
            response = client.post("/v1/videos", json={
                "video": fixture.video_document(),
                "detections": fixture.detections_ndjson(),
                "annotators": {"scripted": fixture.scripted_rules},
            })
            response.raise_for_status()
            name = fixture.video.video_id
            listing = client.get(f"/v1/videos/{name}/tracklets")
            listing.raise_for_status()
            write(f"{name}.tracklets.json", listing.json())

        query = ("SELECT ID, Category FROM tracklets "
                 "WHERE ID > 0 ORDER BY avg_velocity() DESC")
        queried = client.post("/v1/videos/motorcycle/query",
                              json={"query": query})
        queried.raise_for_status()
        write("query_response.json", {"request": {"query": query},
                                      "response": queried.json()})

        session = client.post("/v1/sessions", json={"video_id": "motorcycle"})
        session.raise_for_status()
        session_id = session.json()["session_id"]
        exchanges = []
        for question in CHAT_QUESTIONS:
            reply = client.post(f"/v1/sessions/{session_id}/messages",
                                json={"question": question})
            reply.raise_for_status()
            exchanges.append({"request": {"question": question},
                              "response": reply.json()})
        history = client.get(f"/v1/sessions/{session_id}/history")
        history.raise_for_status()
        write("chat_turns.json", {"session": session.json(),
                                  "exchanges": exchanges,
                                  "history": history.json()})
    return 0


if __name__ == "__main__":
    sys.exit(main())

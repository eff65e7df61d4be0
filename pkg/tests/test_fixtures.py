import json

from trackletdb import store
from trackletdb.annotators import AnnotatorSuite
from trackletdb.fixtures import FIXTURES, write_fixture_files
from trackletdb.ingest import build_database, load_detections
from trackletdb.model import VideoMeta, audio_cell, motion_cell, trajectory_cell


def cells_match(db, golden):
    assert golden["video_id"] == db.video.video_id
    assert len(golden["records"]) == len(db.records)
    for want, record in zip(golden["records"], db.records):
        assert record.id == want["id"]
        assert record.category == want["category"]
        assert record.appearance == want["appearance"]
        assert motion_cell(record) == want["motion"]
        cell = trajectory_cell(record)
        if want["trajectory_prefix"] is None:
            assert cell is None
        else:
            assert cell.startswith(want["trajectory_prefix"])
        if want["audio"] is None:
            assert record.audio is None
        else:
            assert record.audio.category == want["audio"]["category"]
            assert record.audio.transcript == want["audio"]["transcript"]
            assert record.audio.emotion == want["audio"]["emotion"]


class TestGoldenCells:
    def test_motorcycle(self, motorcycle_db, golden_dir):
        golden = json.loads((golden_dir / "motorcycle_cells.json").read_text())
        cells_match(motorcycle_db, golden)

    def test_classroom(self, classroom_db, golden_dir):
        golden = json.loads((golden_dir / "classroom_cells.json").read_text())
        cells_match(classroom_db, golden)

    def test_frozen_dumps_are_byte_stable(self, motorcycle_db, classroom_db,
                                          golden_dir):
        for name, db in (("motorcycle", motorcycle_db),
                         ("classroom", classroom_db)):
            frozen = (golden_dir / f"{name}.tracklets.json").read_bytes()
            assert store.dumps(db) == frozen

    def test_audio_cells(self, motorcycle_db, classroom_db):
        assert audio_cell(motorcycle_db.records[0].audio) == "engine"
        assert audio_cell(classroom_db.records[0].audio) == (
            'speech: "today we are going to review the last lesson" (neutral)')


class TestFixtureProperties:
    def test_rebuild_is_deterministic(self):
        for make in FIXTURES.values():
            assert store.dumps(make().build()) == store.dumps(make().build())

    def test_parallel_build_matches(self, motorcycle):
        assert motorcycle.build(max_workers=4) == motorcycle.build()

    def test_velocity_from_trajectory(self, motorcycle_db):
        from trackletdb.tql import avg_velocity

        # dx is 2 px/frame at 5 fps; centers move 10 px/s with no vertical drift
        assert avg_velocity(motorcycle_db.records[1]) == 10.0

    def test_written_files_ingest_to_same_database(self, tmp_path, motorcycle,
                                                   motorcycle_db):
        paths = write_fixture_files(motorcycle, tmp_path)
        video = VideoMeta(**json.loads(paths["video"].read_text()))
        detections = load_detections(paths["detections"])
        suite = AnnotatorSuite.from_spec(json.loads(paths["annotators"].read_text()))
        rebuilt = build_database(video, detections, suite, motorcycle.config)
        assert rebuilt == motorcycle_db

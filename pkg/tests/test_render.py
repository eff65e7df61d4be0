from trackletdb.render import COLUMNS, database_rows, format_table, inspect_text, record_cells


class TestRecordCells:
    def test_environment_row(self, motorcycle_db):
        cells = record_cells(motorcycle_db.records[0])
        assert cells[0] == "0"
        assert cells[1] == "environment"
        assert cells[4] == "N/A"
        assert cells[5] == "engine"

    def test_tracklet_row(self, motorcycle_db):
        cells = record_cells(motorcycle_db.records[1], stride_s=2.0)
        assert cells[1] == "motorcycle"
        assert cells[4].startswith("at 0 s, (198,198,294,277); at 2 s,")
        assert cells[5] == "N/A"

    def test_rows_sorted_by_id(self, classroom_db):
        rows = database_rows(classroom_db)
        assert [row[0] for row in rows] == ["0", "1", "2", "3"]


class TestFormatTable:
    def test_layout(self):
        text = format_table([("1", "cat", "a", "b", "c", "d")],
                            header=COLUMNS)
        lines = text.splitlines()
        assert lines[0].startswith("ID | Category")
        assert set(lines[1]) == {"-", "+"}
        assert len(lines) == 3

    def test_no_truncation(self):
        wide = "x" * 300
        text = format_table([("1", wide)], header=("ID", "Appearance"))
        assert wide in text

    def test_no_trailing_whitespace(self, classroom_db):
        for line in inspect_text(classroom_db).splitlines():
            assert line == line.rstrip()


class TestInspectText:
    def test_summary_line(self, motorcycle_db):
        text = inspect_text(motorcycle_db)
        assert text.startswith(
            "video motorcycle: 640x360, 35 frames @ 5 fps, 7 s, 3 records")

    def test_contains_every_record(self, classroom_db):
        text = inspect_text(classroom_db)
        for category in ("environment", "laptop", "person", "tv"):
            assert category in text

"""Tabular views of a tracklet database for the CLI and tests."""

from __future__ import annotations

from .model import TrackletDatabase, audio_cell, motion_cell, trajectory_cell

COLUMNS = ("ID", "Category", "Appearance", "Motion", "Trajectory", "Audio")

MISSING = "N/A"


def record_cells(record, stride_s: float = 1.0) -> tuple[str, ...]:
    """One record as display strings in COLUMNS order."""
    trajectory = trajectory_cell(record, stride_s)
    audio = audio_cell(record.audio)
    return (
        str(record.id),
        record.category,
        record.appearance,
        motion_cell(record),
        MISSING if trajectory is None else trajectory,
        MISSING if audio is None else audio,
    )


def database_rows(db: TrackletDatabase, stride_s: float = 1.0) -> list[tuple[str, ...]]:
    return [record_cells(record, stride_s)
            for record in sorted(db.records, key=lambda r: r.id)]


def format_table(rows: list[tuple[str, ...]], header: tuple[str, ...] = COLUMNS) -> str:
    """Fixed-width ASCII table; cells are never truncated."""
    table = [header, *rows]
    widths = [max(len(row[col]) for row in table) for col in range(len(header))]
    lines = []
    rule = "-+-".join("-" * width for width in widths)
    for index, row in enumerate(table):
        lines.append(" | ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip())
        if index == 0:
            lines.append(rule)
    return "\n".join(lines)


def inspect_text(db: TrackletDatabase, stride_s: float = 1.0) -> str:
    """The whole database as one table, one row per record, ids ascending."""
    video = db.video
    summary = (f"video {video.video_id}: {video.width}x{video.height}, "
               f"{video.num_frames} frames @ {video.fps:g} fps, "
               f"{video.duration_s:g} s, {len(db.records)} records")
    return summary + "\n\n" + format_table(database_rows(db, stride_s))

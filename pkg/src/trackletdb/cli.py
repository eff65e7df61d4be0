"""Command-line interface: ingest, query, chat, serve, inspect."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import chat as chat_mod
from . import store
from .annotators import AnnotatorSuite
from .errors import TrackletDBError
from .ingest import IngestConfig, build_database, load_detections
from .model import VideoMeta
from .render import format_table, inspect_text
from .service import ServiceConfig, create_app
from .tql import evaluate, parse, pretty_print


def _load_json(path: str):
    with open(path, encoding="utf-8") as handle:
        return json.load(handle)


def _annotators_from_arg(arg: str) -> AnnotatorSuite:
    if arg == "synthetic":
        return AnnotatorSuite.synthetic()
    return AnnotatorSuite.from_spec(_load_json(arg))


def _ingest_config(args: argparse.Namespace, file_config: dict) -> IngestConfig:
    settings = dict(file_config.get("ingest", {}))
    for flag, key in (("segment_len", "segment_len_frames"),
                      ("min_tail", "min_tail_frames"),
                      ("stride", "trajectory_render_stride_s")):
        value = getattr(args, flag, None)
        if value is not None:
            settings[key] = value
    if getattr(args, "no_always_asr", False):
        settings["always_asr"] = False
    return IngestConfig(**settings)


def _file_config(args: argparse.Namespace) -> dict:
    path = getattr(args, "config", None)
    return _load_json(path) if path else {}


def cmd_ingest(args: argparse.Namespace) -> int:
    file_config = _file_config(args)
    video = VideoMeta(**_load_json(args.video))
    detections = load_detections(args.detections)
    suite = _annotators_from_arg(args.annotators)
    config = _ingest_config(args, file_config)
    db = build_database(video, detections, suite, config, max_workers=args.workers)
    store.save(db, args.out)
    print(f"ingested {video.video_id}: {len(db.records)} records -> {args.out}")
    return 0


def cmd_query(args: argparse.Namespace) -> int:
    db = store.load(args.db)
    ir = parse(args.query)
    result = evaluate(ir, db, trajectory_stride_s=args.stride)
    if args.json:
        doc = {"query": pretty_print(ir),
               "columns": list(result.columns),
               "rows": [list(row) for row in result.rows],
               "record_ids": list(result.record_ids)}
        print(json.dumps(doc, ensure_ascii=False))
        return 0
    print(pretty_print(ir))
    rows = [tuple("N/A" if cell is None else str(cell) for cell in row)
            for row in result.rows]
    print(format_table(rows, header=result.columns))
    return 0


def _chat_backends(args: argparse.Namespace, file_config: dict) -> list:
    order = tuple(file_config.get("translator_order", ("rule_based",)))
    if args.llm_replies_file or args.llm_endpoint:
        if "llm" not in order:
            order = order + ("llm",)
    config = ServiceConfig(
        data_dir=Path(file_config.get("data_dir", "data")),
        translator_order=order,
        llm_endpoint=args.llm_endpoint or file_config.get("llm_endpoint"),
        llm_replies_file=args.llm_replies_file or file_config.get("llm_replies_file"),
    )
    return config.build_translator()


def cmd_chat(args: argparse.Namespace) -> int:
    db = store.load(args.db)
    backends = _chat_backends(args, _file_config(args))
    session = chat_mod.Session(session_id="cli", video_id=db.video.video_id)
    if args.question:
        for question in args.question:
            turn = chat_mod.ask(session, question, db, backends,
                                trajectory_stride_s=args.stride)
            print(f"you> {question}")
            print(f"bot> {turn.answer}")
        return 0
    print(f"chatting about {db.video.video_id!r}; ctrl-d to exit")
    while True:
        try:
            question = input("you> ")
        except (EOFError, KeyboardInterrupt):
            print()
            return 0
        if not question.strip():
            continue
        turn = chat_mod.ask(session, question, db, backends,
                            trajectory_stride_s=args.stride)
        print(f"bot> {turn.answer}")


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    file_config = _file_config(args)
    order = args.translators.split(",") if args.translators else None
    config = ServiceConfig(
        host=args.host or file_config.get("host", "127.0.0.1"),
        port=args.port if args.port is not None else file_config.get("port", 8420),
        data_dir=Path(args.data_dir or file_config.get("data_dir", "data")),
        ingest=_ingest_config(args, file_config),
        translator_order=tuple(order or file_config.get("translator_order",
                                                        ("rule_based",))),
        llm_endpoint=args.llm_endpoint or file_config.get("llm_endpoint"),
        llm_replies_file=args.llm_replies_file or file_config.get("llm_replies_file"),
        max_ingest_workers=args.workers,
    )
    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="warning")
    return 0


def cmd_inspect(args: argparse.Namespace) -> int:
    db = store.load(args.db)
    print(inspect_text(db, stride_s=args.stride))
    return 0


def _add_stride(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--stride", type=float, default=1.0,
                        help="trajectory rendering stride in seconds")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trackletdb",
        description="Tracklet-centric video database: ingest, query, chat, serve.")
    parser.add_argument("--config", help="optional JSON config file; flags override")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="build and save a tracklet database")
    p.add_argument("--video", required=True, help="video metadata JSON file")
    p.add_argument("--detections", required=True,
                   help="newline-delimited JSON detections file")
    p.add_argument("--annotators", default="synthetic",
                   help='"synthetic" or a JSON annotators spec file')
    p.add_argument("--out", required=True, help="output database path")
    p.add_argument("--segment-len", dest="segment_len", type=int,
                   help="motion window length in frames")
    p.add_argument("--min-tail", dest="min_tail", type=int,
                   help="minimum final window length before merging")
    p.add_argument("--no-always-asr", dest="no_always_asr", action="store_true",
                   help="transcribe only when the audio category is speech")
    p.add_argument("--stride", type=float, help="trajectory rendering stride")
    p.add_argument("--workers", type=int, default=1,
                   help="parallel annotation workers")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("query", help="run one TQL query against a saved database")
    p.add_argument("--db", required=True, help="database path")
    p.add_argument("query", help="TQL query text")
    p.add_argument("--json", action="store_true", help="emit the JSON document")
    _add_stride(p)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("chat", help="interactive question loop over a database")
    p.add_argument("--db", required=True, help="database path")
    p.add_argument("--question", action="append",
                   help="ask one question and exit (repeatable)")
    p.add_argument("--llm-endpoint", help="LLM translation endpoint URL")
    p.add_argument("--llm-replies-file", help="scripted LLM replies JSON file")
    _add_stride(p)
    p.set_defaults(func=cmd_chat)

    p = sub.add_parser("serve", help="run the REST service")
    p.add_argument("--host")
    p.add_argument("--port", type=int)
    p.add_argument("--data-dir", dest="data_dir")
    p.add_argument("--translators", help="comma-separated backend order")
    p.add_argument("--llm-endpoint", help="LLM translation endpoint URL")
    p.add_argument("--llm-replies-file", help="scripted LLM replies JSON file")
    p.add_argument("--segment-len", dest="segment_len", type=int)
    p.add_argument("--min-tail", dest="min_tail", type=int)
    p.add_argument("--no-always-asr", dest="no_always_asr", action="store_true")
    p.add_argument("--stride", type=float)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("inspect", help="pretty-print a saved database as a table")
    p.add_argument("--db", required=True, help="database path")
    _add_stride(p)
    p.set_defaults(func=cmd_inspect)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except TrackletDBError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())

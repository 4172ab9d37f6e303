"""Command-line entry points.

    portal harvest --endpoint URL [--from YYYY-MM-DD] [--max-pages N]
    portal mentions ingest <file|->
    portal serve --config <file>
    portal index rebuild
    portal thumbs generate <arxiv_id> <pdf>

All commands accept --config <file> and --data-dir <dir>; the flag wins
over the config value. Harvest exits 0 on a completed round and nonzero
on failure, with the cursor of the last completed page persisted either
way.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from datetime import date
from pathlib import Path
from typing import Optional, Sequence

from .config import PortalConfig
from .errors import PortalError, StorageFailure
from .service import Portal


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="path to a JSON config file")
    parser.add_argument("--data-dir", help="data directory (overrides config)")


def _load_config(args: argparse.Namespace) -> PortalConfig:
    config = PortalConfig.load(args.config) if args.config else PortalConfig()
    if args.data_dir:
        config = dataclasses.replace(config, data_dir=args.data_dir)
    return config


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="portal", description="pre-print search portal")
    commands = parser.add_subparsers(dest="command", required=True)

    harvest = commands.add_parser("harvest", help="run one metadata harvest round")
    _add_common(harvest)
    harvest.add_argument("--endpoint", help="OAI-PMH endpoint URL")
    harvest.add_argument(
        "--from", dest="from_date", metavar="YYYY-MM-DD",
        help="start a fresh round from this datestamp (discards the cursor)",
    )
    harvest.add_argument("--max-pages", type=int, help="stop after N pages (round resumable)")

    mentions = commands.add_parser("mentions", help="social mention utilities")
    mentions_sub = mentions.add_subparsers(dest="subcommand", required=True)
    ingest = mentions_sub.add_parser("ingest", help="ingest a mention log")
    _add_common(ingest)
    ingest.add_argument("source", help="path to a JSONL mention log, or - for stdin")

    serve = commands.add_parser("serve", help="run the HTTP API")
    _add_common(serve)

    index = commands.add_parser("index", help="search index utilities")
    index_sub = index.add_subparsers(dest="subcommand", required=True)
    rebuild = index_sub.add_parser("rebuild", help="re-index the paper store")
    _add_common(rebuild)

    thumbs = commands.add_parser("thumbs", help="thumbnail utilities")
    thumbs_sub = thumbs.add_subparsers(dest="subcommand", required=True)
    generate = thumbs_sub.add_parser("generate", help="generate one preview strip")
    _add_common(generate)
    generate.add_argument("arxiv_id")
    generate.add_argument("pdf", help="path to the paper's PDF")

    return parser


def _cmd_harvest(args: argparse.Namespace) -> int:
    config = _load_config(args)
    portal = Portal.open(config)
    from_date = date.fromisoformat(args.from_date) if args.from_date else None
    try:
        cursor = portal.harvest(
            args.endpoint, from_date=from_date, max_pages=args.max_pages
        )
    except (PortalError, ValueError) as exc:
        print(f"harvest failed: {exc}", file=sys.stderr)
        return 1
    if cursor.resumption_token:
        print(f"harvest paused mid-round after --max-pages; {cursor.records_ingested} records so far")
    else:
        print(
            f"harvest complete: {cursor.records_ingested} records,"
            f" cursor at {cursor.last_completed_datestamp.isoformat()}"
        )
    return 0


def _cmd_mentions_ingest(args: argparse.Namespace) -> int:
    config = _load_config(args)
    portal = Portal.open(config)
    try:
        if args.source == "-":
            report = portal.ingest_mentions(sys.stdin)
        else:
            with open(args.source, encoding="utf-8") as fh:
                report = portal.ingest_mentions(fh)
    except FileNotFoundError:
        print(f"no such file: {args.source}", file=sys.stderr)
        return 1
    except StorageFailure as exc:
        partial = getattr(exc, "partial_report", None)
        print(f"ingestion aborted: {exc}", file=sys.stderr)
        if partial is not None:
            print(
                f"progress before failure: accepted={partial.accepted}"
                f" duplicates={partial.duplicates} rejected={partial.rejected}",
                file=sys.stderr,
            )
        return 1
    print(
        f"accepted={report.accepted} duplicates={report.duplicates} rejected={report.rejected}"
    )
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .api import create_app

    config = _load_config(args)
    portal = Portal.open(config)
    app = create_app(portal)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
    return 0


def _cmd_index_rebuild(args: argparse.Namespace) -> int:
    config = _load_config(args)
    portal = Portal.open(config)
    count = portal.rebuild_index()
    print(f"indexed {count} papers")
    return 0


def _cmd_thumbs_generate(args: argparse.Namespace) -> int:
    config = _load_config(args)
    portal = Portal.open(config)
    if portal.thumbs is None:
        print("no rasterizer configured; set the 'rasterizer' config key", file=sys.stderr)
        return 1
    status = portal.thumbs.generate(args.arxiv_id, Path(args.pdf))
    if status.state == "done":
        print(f"done: {portal.thumbnail_path(args.arxiv_id)}")
        return 0
    print(f"failed: {status.reason}", file=sys.stderr)
    return 1


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "harvest":
        return _cmd_harvest(args)
    if args.command == "mentions":
        return _cmd_mentions_ingest(args)
    if args.command == "serve":
        return _cmd_serve(args)
    if args.command == "index":
        return _cmd_index_rebuild(args)
    if args.command == "thumbs":
        return _cmd_thumbs_generate(args)
    raise AssertionError(f"unhandled command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())

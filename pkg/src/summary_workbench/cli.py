"""Batch front end for the pipeline stages, plus `serve`.

Structured output is JSON on stdout, deterministic byte-for-byte for
identical inputs. Exit codes: 0 success, 1 usage, 2 input error,
3 transport error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .align import AlignmentConfig, align, alignment_to_wire
from . import consolidate as conslib
from . import salience
from .highlights import Highlight, HighlightSet, MarkupError, normalize
from .service import ServiceConfig, create_app
from .spans import Span, SpanError
from .textpipe import analyze

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_TRANSPORT = 3


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags; the contract here wants 1
    def error(self, message: str):  # noqa: D102 - argparse hook
        raise UsageError(message)


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text("utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path!r}: {exc}")


def _read_spans(path: str) -> list[Span]:
    spans = []
    for lineno, line in enumerate(_read_text(path).splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise InputError(f"spans line {lineno}: expected 'start end', got {line!r}")
        try:
            spans.append(Span(int(parts[0]), int(parts[1])))
        except (ValueError, SpanError) as exc:
            raise InputError(f"spans line {lineno}: {exc}")
    return spans


def _highlight_set(doc_id: str, spans: list[Span], text_length: int) -> HighlightSet:
    for span in spans:
        if span.end > text_length:
            raise InputError(f"span [{span.start}, {span.end}) exceeds text length {text_length}")
    return normalize(
        HighlightSet(document_id=doc_id, active=tuple(Highlight(s, "user") for s in spans))
    )


def _emit_json(payload) -> None:
    sys.stdout.write(json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=2) + "\n")


def cmd_suggest(args: argparse.Namespace) -> int:
    text = _read_text(args.input)
    doc = analyze(text, "cli")
    suggestions = salience.suggest(doc, ratio=args.ratio)
    _emit_json(
        [
            {
                "sentence_index": int(item.id.removeprefix("sent-")),
                "span": [item.span.start, item.span.end],
                "score": item.score,
                "text": text[item.span.start : item.span.end],
            }
            for item in suggestions.items
        ]
    )
    return EXIT_OK


def cmd_consolidate(args: argparse.Namespace) -> int:
    if args.engine == "external" and not args.endpoint:
        raise UsageError("--engine external requires --endpoint")
    doc = analyze(_read_text(args.input), "cli")
    highlights = _highlight_set(doc.id, _read_spans(args.highlights), len(doc.text))
    try:
        if args.engine == "baseline":
            draft = conslib.consolidate_baseline(doc, highlights)
        else:
            cfg = conslib.GenerationConfig(endpoint=args.endpoint, timeout=args.timeout)
            draft = conslib.consolidate_external(doc, highlights, cfg)
    except conslib.EmptyHighlightsError as exc:
        raise InputError(str(exc))
    sys.stdout.write(draft.text + "\n")
    return EXIT_OK


def cmd_align(args: argparse.Namespace) -> int:
    source = analyze(_read_text(args.source), "source")
    summary = analyze(_read_text(args.summary), "summary")
    highlights = _highlight_set(source.id, _read_spans(args.highlights), len(source.text))
    cfg = AlignmentConfig(
        min_content_tokens=args.min_content_tokens,
        coverage_threshold=args.coverage_threshold,
        max_iterations=args.max_iterations,
    )
    amap = align(source, highlights, summary, cfg)
    _emit_json(alignment_to_wire(amap))
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    host, _, port = args.addr.rpartition(":")
    if not port.isdigit():
        raise UsageError(f"--addr must be host:port, got {args.addr!r}")
    config = ServiceConfig.from_env(
        data_dir=Path(args.data_dir) if args.data_dir else None,
        host=host or "127.0.0.1",
        port=int(port),
        model_endpoint=args.model_endpoint,
        scorer_endpoint=args.scorer_endpoint,
        suggestion_ratio=args.ratio,
        min_content_tokens=args.min_content_tokens,
        coverage_threshold=args.coverage_threshold,
        max_iterations=args.max_iterations,
    )
    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
    return EXIT_OK


def _add_alignment_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--min-content-tokens", type=int, default=None)
    parser.add_argument("--coverage-threshold", type=float, default=None)
    parser.add_argument("--max-iterations", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="summary-workbench", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("suggest", help="rank sentences and print suggested highlights")
    p.add_argument("input", help="document file, or - for stdin")
    p.add_argument("--ratio", type=float, default=0.3, help="fraction of sentences to suggest")
    p.set_defaults(func=cmd_suggest)

    p = sub.add_parser("consolidate", help="fuse highlighted content into a summary")
    p.add_argument("input", help="document file, or - for stdin")
    p.add_argument("--highlights", required=True, help="spans file: one 'start end' per line")
    p.add_argument("--engine", choices=["baseline", "external"], default="baseline")
    p.add_argument("--endpoint", default="", help="model endpoint URL (external engine)")
    p.add_argument("--timeout", type=float, default=30.0)
    p.set_defaults(func=cmd_consolidate)

    p = sub.add_parser("align", help="align summary sentences to source spans")
    p.add_argument("source", help="source document file, or - for stdin")
    p.add_argument("summary", help="summary file")
    p.add_argument("--highlights", required=True, help="spans file: one 'start end' per line")
    _add_alignment_flags(p)
    p.set_defaults(
        func=cmd_align, min_content_tokens=3, coverage_threshold=0.25, max_iterations=4
    )

    p = sub.add_parser("serve", help="run the session REST service")
    p.add_argument("--addr", default="127.0.0.1:8077", help="host:port to listen on")
    p.add_argument("--data-dir", default="", help="session storage directory")
    p.add_argument("--model-endpoint", default=None)
    p.add_argument("--scorer-endpoint", default=None)
    p.add_argument("--ratio", type=float, default=None)
    _add_alignment_flags(p)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InputError, MarkupError, SpanError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except conslib.GenerationTransportError as exc:
        print(f"transport error: {exc}", file=sys.stderr)
        return EXIT_TRANSPORT
    except KeyboardInterrupt:
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

"""``rex`` command line: extract, mask and parse REPL transcripts.

Exit status: 0 success, 1 I/O failure, 2 malformed input.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .emit import RENDER_METHODS, emit_json_ir, emit_rspec
from .errors import TranscriptError
from .pipeline import MaskMismatch, extract, mask_sessions, parse_masks
from .sessionizer import DEFAULT_BURST_GAP
from .transcript import Session, dump_events, parse_transcript

EXIT_OK = 0
EXIT_IO = 1
EXIT_INPUT = 2


class _Fail(Exception):
    def __init__(self, code: int, message: str) -> None:
        super().__init__(message)
        self.code = code


def _positive_int(value: str) -> int:
    try:
        n = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {value!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1 second")
    return n


def _default_gap() -> int:
    raw = os.environ.get("REX_BURST_GAP")
    if not raw:
        return DEFAULT_BURST_GAP
    try:
        return _positive_int(raw)
    except argparse.ArgumentTypeError as exc:
        raise _Fail(EXIT_INPUT, f"REX_BURST_GAP: {exc}") from None


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise _Fail(EXIT_IO, f"{path}: {exc}") from None


def _load(path: str, lenient: bool) -> Session:
    text = _read(path)
    try:
        return parse_transcript(text, lenient=lenient)
    except TranscriptError as exc:
        where = f"{path}:{exc.line}" if exc.line is not None else path
        raise _Fail(EXIT_INPUT, f"{where}: {type(exc).__name__}: {exc.message}") from None


def _write(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
        return
    try:
        Path(output).write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise _Fail(EXIT_IO, f"{output}: {exc}") from None


def _warn(messages: list[str]) -> None:
    for message in messages:
        print(f"warning: {message}", file=sys.stderr)
    if messages:
        print(f"{len(messages)} warning(s)", file=sys.stderr)


def cmd_extract(args: argparse.Namespace) -> int:
    session = _load(args.transcript, args.lenient)
    masks = None
    if args.masks:
        try:
            masks = parse_masks(_read(args.masks), expected=len(session.instructions))
        except ValueError as exc:
            raise _Fail(EXIT_INPUT, f"{args.masks}: {exc}") from None
    gap = args.burst_gap if args.burst_gap is not None else _default_gap()
    result = extract(session, burst_gap=gap, masks=masks)
    if args.format == "json":
        text = emit_json_ir(result.tree) + "\n"
    else:
        text = emit_rspec(result.tree, render=args.render)
    _write(text, args.output)
    _warn(result.warnings)
    return EXIT_OK


def cmd_mask(args: argparse.Namespace) -> int:
    original = _load(args.original, args.lenient)
    replay = _load(args.replay, args.lenient)
    try:
        patterns = mask_sessions(original, replay)
    except MaskMismatch as exc:
        raise _Fail(EXIT_INPUT, f"mismatch at {exc}") from None
    _write("".join((p.render() if p is not None else "") + "\n" for p in patterns), args.output)
    return EXIT_OK


def cmd_parse(args: argparse.Namespace) -> int:
    session = _load(args.transcript, args.lenient)
    _write(dump_events(session) + "\n", args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rex", description="Extract unit tests from recorded REPL sessions.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--lenient", action="store_true", help="accept prompts without timestamps")
    common.add_argument("-o", "--output", help="write to this file instead of stdout")

    p = sub.add_parser("extract", parents=[common], help="emit a test suite from a transcript")
    p.add_argument("transcript")
    p.add_argument(
        "--burst-gap",
        type=_positive_int,
        default=None,
        metavar="SECONDS",
        help=f"split bursts at pauses longer than this (default: $REX_BURST_GAP or {DEFAULT_BURST_GAP})",
    )
    p.add_argument("--format", choices=("rspec", "json"), default="rspec")
    p.add_argument("--render", choices=RENDER_METHODS, default="inspect")
    p.add_argument("--masks", help="pattern file produced by 'rex mask'")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("mask", parents=[common], help="diff a transcript against its replay")
    p.add_argument("original")
    p.add_argument("replay")
    p.set_defaults(func=cmd_mask)

    p = sub.add_parser("parse", parents=[common], help="dump parsed instructions as JSON")
    p.add_argument("transcript")
    p.set_defaults(func=cmd_parse)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Fail as exc:
        print(f"rex: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())

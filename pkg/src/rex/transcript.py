"""REX transcript format v1: parsing, event dumps and re-rendering.

A transcript is the text of a REPL session whose prompt was customised to
carry the wall-clock time::

    $ irb
    [2013-01-07T10:00:00Z] >> require 'rational'
    => true
    [2013-01-07T10:00:12Z] >> Rational.new(1,3)
    NoMethodError: private method `new' called for Rational:Class
    [2013-01-07T10:00:52Z] >> quit

Lines are classified in this order of precedence:

1. ``[<ISO8601>] >> <src>`` starts a new instruction.
2. ``[<ISO8601>] .. <src>`` continues the current instruction's source.
3. ``=> <text>`` appends a result chunk.
4. ``<Kind>Error: <msg>`` / ``<Kind>Exception: <msg>`` sets the error; later
   unprefixed lines up to the next prompt are folded into its message.
5. any other non-empty line appends a print chunk.
6. lines before the first prompt form the preamble.

Blank lines after the first prompt carry no information and are skipped.
"""

from __future__ import annotations

import calendar
import json
import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum

from .errors import EmptyInput, MalformedTimestamp, NonMonotonicTime, OrphanOutput

PROMPT_RE = re.compile(r"^\[(?P<stamp>[^\]]*)\] (?P<mark>>>|\.\.)(?: (?P<src>.*))?$")
BARE_PROMPT_RE = re.compile(r"^(?P<mark>>>|\.\.)(?: (?P<src>.*))?$")
STAMP_RE = re.compile(r"^\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}Z$")
ERROR_RE = re.compile(r"^(?P<kind>(?:[A-Za-z_]\w*::)*[A-Za-z_]\w*(?:Error|Exception)):(?: (?P<msg>.*))?$")
RESULT_PREFIX = "=> "
TERMINATORS = frozenset({"quit", "exit", "quit()", "exit()"})

STAMP_FORMAT = "%Y-%m-%dT%H:%M:%SZ"


class OutputKind(str, Enum):
    RESULT = "result"
    PRINT = "print"


@dataclass(frozen=True)
class OutputChunk:
    kind: OutputKind
    text: str


@dataclass(frozen=True)
class ReplError:
    kind: str
    message: str


@dataclass(frozen=True)
class Instruction:
    index: int
    timestamp: int
    source: str
    outputs: tuple[OutputChunk, ...] = ()
    error: ReplError | None = None

    @property
    def result(self) -> str | None:
        """Text of the last result chunk, if any."""
        for chunk in reversed(self.outputs):
            if chunk.kind is OutputKind.RESULT:
                return chunk.text
        return None

    @property
    def observable(self) -> str | None:
        """Last result text, falling back to the last printed line."""
        text = self.result
        if text is not None:
            return text
        for chunk in reversed(self.outputs):
            if chunk.kind is OutputKind.PRINT:
                return chunk.text
        return None


@dataclass(frozen=True)
class Session:
    instructions: tuple[Instruction, ...] = ()
    preamble: tuple[str, ...] = field(default=())


def parse_timestamp(stamp: str) -> int:
    """Convert ``YYYY-MM-DDTHH:MM:SSZ`` to whole seconds since the epoch."""
    if not STAMP_RE.match(stamp):
        raise ValueError(f"not an ISO-8601 UTC timestamp: {stamp!r}")
    return calendar.timegm(datetime.strptime(stamp, STAMP_FORMAT).timetuple())


def format_timestamp(seconds: int) -> str:
    return datetime.fromtimestamp(seconds, tz=timezone.utc).strftime(STAMP_FORMAT)


class _Draft:
    """Mutable accumulator for the instruction currently being parsed."""

    def __init__(self, timestamp: int, source: str, line: int) -> None:
        self.timestamp = timestamp
        self.lines = [source]
        self.line = line
        self.outputs: list[OutputChunk] = []
        self.error_kind: str | None = None
        self.error_lines: list[str] = []

    @property
    def source(self) -> str:
        return "\n".join(self.lines)

    def freeze(self, index: int) -> Instruction:
        error = None
        if self.error_kind is not None:
            error = ReplError(self.error_kind, "\n".join(self.error_lines))
        return Instruction(index, self.timestamp, self.source, tuple(self.outputs), error)


def _split_lines(text: str) -> list[str]:
    text = text.replace("\r\n", "\n")
    if not text:
        return []
    lines = text.split("\n")
    if lines[-1] == "":
        lines.pop()
    return lines


def _match_prompt(line: str, lineno: int, lenient: bool) -> tuple[str, int, str] | None:
    """Return ``(mark, timestamp, source)`` if ``line`` is a prompt line."""
    m = PROMPT_RE.match(line)
    if m is not None:
        try:
            stamp = parse_timestamp(m["stamp"])
        except ValueError:
            raise MalformedTimestamp(f"unparseable prompt time {m['stamp']!r}", lineno) from None
        return m["mark"], stamp, (m["src"] or "").rstrip()
    m = BARE_PROMPT_RE.match(line)
    if m is not None:
        if not lenient:
            raise MalformedTimestamp("prompt without timestamp (use lenient mode for bare prompts)", lineno)
        return m["mark"], 0, (m["src"] or "").rstrip()
    return None


def parse_transcript(text: str, lenient: bool = False) -> Session:
    """Parse REX transcript text into a :class:`Session`.

    In lenient mode bare ``>> src`` prompts are accepted and stamped 0, which
    puts the whole session in a single burst.
    """
    preamble: list[str] = []
    drafts: list[_Draft] = []
    current: _Draft | None = None
    last_stamp: int | None = None

    for lineno, line in enumerate(_split_lines(text), start=1):
        prompt = _match_prompt(line, lineno, lenient)
        if prompt is not None:
            mark, stamp, source = prompt
            if mark == ">>":
                if not source.strip():
                    raise EmptyInput("prompt with blank source", lineno)
                if last_stamp is not None and stamp < last_stamp:
                    raise NonMonotonicTime(
                        f"timestamp {format_timestamp(stamp)} is earlier than the previous prompt", lineno
                    )
                last_stamp = stamp
                current = _Draft(stamp, source, lineno)
                drafts.append(current)
            else:
                if current is None:
                    raise OrphanOutput("continuation line before any prompt", lineno)
                current.lines.append(source)
            continue

        if current is None:
            if line.startswith(RESULT_PREFIX) or line == RESULT_PREFIX.rstrip():
                raise OrphanOutput("result line before any prompt", lineno)
            preamble.append(line)
            continue

        if not line.strip():
            continue
        if current.error_kind is not None:
            current.error_lines.append(line)
            continue
        if line.startswith(RESULT_PREFIX) or line == "=>":
            current.outputs.append(OutputChunk(OutputKind.RESULT, line[len(RESULT_PREFIX):]))
            continue
        m = ERROR_RE.match(line)
        if m is not None:
            current.error_kind = m["kind"]
            current.error_lines = [m["msg"] or ""]
            continue
        current.outputs.append(OutputChunk(OutputKind.PRINT, line))

    kept = [d for d in drafts if d.source.strip() not in TERMINATORS]
    return Session(tuple(d.freeze(i) for i, d in enumerate(kept)), tuple(preamble))


def format_transcript(session: Session) -> str:
    """Render a session back into transcript text (inverse of parsing)."""
    out = list(session.preamble)
    for ins in session.instructions:
        stamp = format_timestamp(ins.timestamp)
        first, *rest = ins.source.split("\n")
        out.append(f"[{stamp}] >> {first}")
        out.extend(f"[{stamp}] .. {line}".rstrip() for line in rest)
        for chunk in ins.outputs:
            out.append(RESULT_PREFIX + chunk.text if chunk.kind is OutputKind.RESULT else chunk.text)
        if ins.error is not None:
            head, *tail = ins.error.message.split("\n")
            out.append(f"{ins.error.kind}: {head}" if head else f"{ins.error.kind}:")
            out.extend(tail)
    return "".join(line + "\n" for line in out)


def _instruction_record(ins: Instruction) -> dict:
    return {
        "index": ins.index,
        "timestamp": ins.timestamp,
        "source": ins.source,
        "outputs": [{"kind": c.kind.value, "text": c.text} for c in ins.outputs],
        "error": None if ins.error is None else {"kind": ins.error.kind, "message": ins.error.message},
    }


def dump_events(session: Session) -> str:
    """Render instructions as a JSON array, one object per instruction."""
    records = [_instruction_record(ins) for ins in session.instructions]
    if not records:
        return "[]"
    return json.dumps(records, indent=2, ensure_ascii=False)


def load_events(text: str) -> Session:
    """Inverse of :func:`dump_events`.  The preamble is not part of the dump."""
    instructions = []
    for rec in json.loads(text):
        error = rec["error"]
        instructions.append(
            Instruction(
                index=rec["index"],
                timestamp=rec["timestamp"],
                source=rec["source"],
                outputs=tuple(OutputChunk(OutputKind(c["kind"]), c["text"]) for c in rec["outputs"]),
                error=None if error is None else ReplError(error["kind"], error["message"]),
            )
        )
    return Session(tuple(instructions))

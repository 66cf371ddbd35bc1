"""Error filtering, output assertions, replay-diff masking and naming."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Sequence, Union

from . import lexer
from .errors import NoObservableOutput
from .lcs import align
from .transcript import OutputChunk, OutputKind, ReplError

if TYPE_CHECKING:
    from .depgraph import RewrittenBurst

WILDCARD_RENDERING = "(.*)"
MERGE_BELOW = 3
DEFAULT_CONTEXT_NAME = "Session"
NAME_OPERATORS = frozenset({"+", "-", "*", "/", "%", "**", "==", "<", ">", "<=", ">=", "<<", ">>", "&", "|"})

# Regex metacharacters, plus '/' and '#' so the pattern also survives inside a
# Ruby /.../ literal.
_REGEX_META = frozenset("\\.^$*+?()[]{}|/#-")
_CONTROL_ESCAPES = {"\t": "\\t", "\n": "\\n", "\r": "\\r", "\f": "\\f", "\v": "\\v"}
_CONTROL_UNESCAPES = {v[1]: k for k, v in _CONTROL_ESCAPES.items()}


def escape_regex(text: str) -> str:
    out = []
    for ch in text:
        if ch in _CONTROL_ESCAPES:
            out.append(_CONTROL_ESCAPES[ch])
        elif ch in _REGEX_META:
            out.append("\\" + ch)
        else:
            out.append(ch)
    return "".join(out)


@dataclass(frozen=True)
class Literal:
    text: str


@dataclass(frozen=True)
class Wildcard:
    pass


WILDCARD = Wildcard()
Segment = Union[Literal, Wildcard]


@dataclass(frozen=True)
class MaskedPattern:
    segments: tuple[Segment, ...] = ()

    def __post_init__(self) -> None:
        for a, b in zip(self.segments, self.segments[1:]):
            if isinstance(a, Wildcard) and isinstance(b, Wildcard):
                raise ValueError("adjacent wildcards")
            if isinstance(a, Literal) and isinstance(b, Literal):
                raise ValueError("adjacent literals")
        if any(isinstance(s, Literal) and not s.text for s in self.segments):
            raise ValueError("empty literal")

    @classmethod
    def literal(cls, text: str) -> MaskedPattern:
        return cls((Literal(text),) if text else ())

    @property
    def has_wildcard(self) -> bool:
        return any(isinstance(s, Wildcard) for s in self.segments)

    @property
    def text(self) -> str:
        """Concatenated literal text (the whole pattern when it has no wildcard)."""
        return "".join(s.text for s in self.segments if isinstance(s, Literal))

    def render(self) -> str:
        return "".join(
            WILDCARD_RENDERING if isinstance(s, Wildcard) else escape_regex(s.text) for s in self.segments
        )

    @classmethod
    def parse(cls, rendered: str) -> MaskedPattern:
        """Inverse of :meth:`render`."""
        segments: list[Segment] = []
        buf: list[str] = []
        i = 0
        while i < len(rendered):
            if rendered.startswith(WILDCARD_RENDERING, i):
                if buf:
                    segments.append(Literal("".join(buf)))
                    buf = []
                if not segments or not isinstance(segments[-1], Wildcard):
                    segments.append(WILDCARD)
                i += len(WILDCARD_RENDERING)
                continue
            ch = rendered[i]
            if ch == "\\" and i + 1 < len(rendered):
                nxt = rendered[i + 1]
                buf.append(_CONTROL_UNESCAPES.get(nxt, nxt))
                i += 2
                continue
            buf.append(ch)
            i += 1
        if buf:
            segments.append(Literal("".join(buf)))
        return cls(tuple(segments))

    def to_json(self) -> list[dict]:
        return [
            {"kind": "wildcard"} if isinstance(s, Wildcard) else {"kind": "literal", "text": s.text}
            for s in self.segments
        ]

    @classmethod
    def from_json(cls, data: Iterable[dict]) -> MaskedPattern:
        return cls(tuple(WILDCARD if d["kind"] == "wildcard" else Literal(d["text"]) for d in data))


@dataclass(frozen=True)
class Assertion:
    subject: str
    pattern: MaskedPattern


@dataclass(frozen=True)
class TestCase:
    __test__ = False  # not a pytest class

    name: str
    statements: tuple[str, ...]
    assertion: Assertion | None = None

    @property
    def smoke(self) -> bool:
        return self.assertion is None


@dataclass(frozen=True)
class ContextTree:
    name: str = DEFAULT_CONTEXT_NAME
    imports: tuple[str, ...] = ()
    setup: tuple[str, ...] = ()
    children: tuple[ContextTree, ...] = ()
    tests: tuple[TestCase, ...] = ()

    def walk(self):
        """Yield every context, depth first, root included."""
        yield self
        for child in self.children:
            yield from child.walk()

    def all_tests(self) -> list[TestCase]:
        return [case for ctx in self.walk() for case in ctx.tests]


def filter_for_emission(
    burst: RewrittenBurst, errors: Sequence[ReplError | None] | None = None
) -> tuple[list[str], bool]:
    """Drop statements whose instruction raised.

    Returns the surviving statements in order and whether the burst's last
    instruction raised.
    """
    if errors is None:
        errors = [ins.error for ins in burst.burst.instructions]
    kept = [stmt for stmt, err in zip(burst.statements, errors) if err is None]
    return kept, bool(errors) and errors[-1] is not None


def final_output(outputs: Sequence[OutputChunk]) -> str | None:
    for kind in (OutputKind.RESULT, OutputKind.PRINT):
        for chunk in reversed(outputs):
            if chunk.kind is kind:
                return chunk.text
    return None


def synthesize_assertion(
    burst: RewrittenBurst,
    outputs: Sequence[OutputChunk],
    final_errored: bool,
    mask: MaskedPattern | None = None,
) -> Assertion | None:
    """Assert on the last thing the burst printed, or nothing for a smoke test.

    Only the final instruction's output is used; intermediate output is
    dropped.  A burst ending in an error gets no assertion.  ``mask``
    replaces the literal pattern with a replay-diffed one.
    """
    if final_errored or burst.subject is None:
        return None
    text = final_output(outputs)
    if text is None:
        warnings.warn(
            NoObservableOutput(f"instruction {burst.indices[-1]} produced no output; emitting a smoke test"),
            stacklevel=2,
        )
        return None
    return Assertion(burst.subject, mask if mask is not None else MaskedPattern.literal(text))


def _runs(a: str, b: str) -> list[Segment]:
    """Alternate common runs and unaligned spans, before merging."""
    segments: list[Segment] = []
    pi = pj = 0
    run: list[str] = []
    for i, j in align(a, b):
        if (i, j) != (pi, pj):
            if run:
                segments.append(Literal("".join(run)))
                run = []
            segments.append(WILDCARD)
        run.append(a[i])
        pi, pj = i + 1, j + 1
    if run:
        segments.append(Literal("".join(run)))
    if (pi, pj) != (len(a), len(b)):
        segments.append(WILDCARD)
    return segments


def mask_outputs(original: str, replay: str) -> MaskedPattern:
    """Generalize two renderings of the same value into one pattern.

    Characters on a longest-common-subsequence alignment are kept literally;
    everything else becomes a wildcard.  Common runs shorter than three
    characters that sit between two wildcards are chance matches and are
    swallowed by the surrounding wildcard.
    """
    merged: list[Segment] = []
    raw = _runs(original, replay)
    for k, seg in enumerate(raw):
        if isinstance(seg, Literal):
            flanked = 0 < k < len(raw) - 1 and isinstance(raw[k + 1], Wildcard) and isinstance(raw[k - 1], Wildcard)
            if flanked and len(seg.text) < MERGE_BELOW:
                seg = WILDCARD
        if isinstance(seg, Wildcard) and merged and isinstance(merged[-1], Wildcard):
            continue
        merged.append(seg)
    return MaskedPattern(tuple(merged))


def name_test(statements: Sequence[str]) -> str:
    """``"should "`` plus the methods and operators the statements exercise."""
    names: dict[str, None] = {}
    for stmt in statements:
        tokens = lexer.tokenize(stmt)
        for i, tok in enumerate(tokens):
            if tok.kind == lexer.IDENT and lexer.after_dot(tokens, i) and not tok.is_constant:
                if tokens[i - 1].text != "::":
                    names.setdefault(tok.text)
            elif (
                tok.kind == lexer.OP
                and tok.text in NAME_OPERATORS
                and tok.depth == 0
                and i > 0
                and tokens[i - 1].kind in lexer.OPERAND_KINDS
            ):
                names.setdefault(tok.text)
    if not names:
        return "should evaluate"
    return "should " + " ".join(names)


def name_context(statements: Iterable[str]) -> str:
    names: dict[str, None] = {}
    for stmt in statements:
        for tok in lexer.tokenize(stmt):
            if tok.is_constant:
                names.setdefault(tok.text)
    return " ".join(names) or DEFAULT_CONTEXT_NAME

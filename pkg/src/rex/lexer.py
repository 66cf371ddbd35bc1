"""A small string-literal-aware tokenizer for REPL input.

It is deliberately not a parser.  It understands enough of Ruby/Python
surface syntax (quotes, comments, symbols, operators, brackets) to find
identifiers, assignments and method calls without being fooled by text
inside string literals.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator

IDENT = "ident"
NUMBER = "number"
STRING = "string"
SYMBOL = "symbol"
SIGIL = "sigil"  # @ivar, @@cvar, $gvar
OP = "op"
OPEN = "open"
CLOSE = "close"
SEP = "sep"  # ';' or newline

KEYWORDS = frozenset(
    {
        "if", "else", "end", "do", "then", "while", "for", "true", "false", "nil",
        "require", "def", "return", "not", "and", "or",
        # beyond the minimal list; none of these can name a REPL variable
        "elsif", "unless", "until", "in", "case", "when", "begin", "rescue",
        "ensure", "yield", "self", "class", "module", "import", "from", "lambda",
        "None", "True", "False", "elif", "pass", "is",
    }
)

ASSIGN_OPS = frozenset(
    {"=", "+=", "-=", "*=", "/=", "%=", "**=", "||=", "&&=", "|=", "&=", "^=", "<<=", ">>="}
)

# Longest first, so that e.g. "**=" wins over "**" and "*".
_OPERATORS = sorted(
    [
        "**=", "||=", "&&=", "<<=", ">>=", "<=>", "===", "...",
        "==", "!=", "<=", ">=", "=>", "=~", "!~", "+=", "-=", "*=", "/=", "%=", "|=", "&=", "^=",
        "**", "<<", ">>", "&&", "||", "::", "..", "->", "&.",
        "+", "-", "*", "/", "%", "=", "<", ">", "!", "&", "|", "^", "~", "?", ":", ".", ",", "@",
    ],
    key=len,
    reverse=True,
)

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NUMBER_RE = re.compile(r"0[xX][0-9a-fA-F_]+|0[bB][01_]+|\d[\d_]*(?:\.\d[\d_]*)?(?:[eE][+-]?\d+)?")
_SIGIL_RE = re.compile(r"(?:@@?|\$)[A-Za-z_][A-Za-z0-9_]*")

OPERAND_KINDS = frozenset({IDENT, NUMBER, STRING, SYMBOL, SIGIL, CLOSE})


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    start: int
    end: int
    depth: int = 0

    @property
    def is_variable(self) -> bool:
        """Lowercase-initial identifier that is not a keyword."""
        return self.kind == IDENT and (self.text[0].islower() or self.text[0] == "_") and self.text not in KEYWORDS

    @property
    def is_constant(self) -> bool:
        return self.kind == IDENT and self.text[0].isupper() and self.text not in KEYWORDS


def _scan_string(src: str, pos: int) -> int:
    """Return the index just past the string literal starting at ``pos``."""
    quote = src[pos]
    if src.startswith(quote * 3, pos) and quote in "'\"":
        end = src.find(quote * 3, pos + 3)
        return len(src) if end < 0 else end + 3
    i = pos + 1
    while i < len(src):
        ch = src[i]
        if ch == "\\":
            i += 2
            continue
        if ch == quote:
            return i + 1
        i += 1
    return len(src)


def _iter_raw(src: str) -> Iterator[tuple[str, int, int]]:
    i = 0
    n = len(src)
    prev_kind = None
    while i < n:
        ch = src[i]
        if ch == "\n":
            yield SEP, i, i + 1
            prev_kind = SEP
            i += 1
            continue
        if ch.isspace():
            i += 1
            continue
        if ch == "#":
            nl = src.find("\n", i)
            i = n if nl < 0 else nl
            continue
        if ch in "'\"`":
            end = _scan_string(src, i)
            yield STRING, i, end
            prev_kind = STRING
            i = end
            continue
        m = _IDENT_RE.match(src, i)
        if m:
            end = m.end()
            # Ruby predicate/bang methods: empty?, save!  (but not x!=y, x?y:z)
            if end < n and src[end] in "?!" and (end + 1 >= n or src[end + 1] not in "=:"):
                if end + 1 >= n or not (src[end + 1].isalnum() or src[end + 1] == "_"):
                    end += 1
            yield IDENT, i, end
            prev_kind = IDENT
            i = end
            continue
        m = _NUMBER_RE.match(src, i)
        if m:
            yield NUMBER, i, m.end()
            prev_kind = NUMBER
            i = m.end()
            continue
        m = _SIGIL_RE.match(src, i)
        if m:
            yield SIGIL, i, m.end()
            prev_kind = SIGIL
            i = m.end()
            continue
        if ch == ":" and i + 1 < n and (src[i + 1].isalpha() or src[i + 1] == "_") and prev_kind not in OPERAND_KINDS:
            m = _IDENT_RE.match(src, i + 1)
            yield SYMBOL, i, m.end()
            prev_kind = SYMBOL
            i = m.end()
            continue
        if ch in "([{":
            yield OPEN, i, i + 1
            prev_kind = OPEN
            i += 1
            continue
        if ch in ")]}":
            yield CLOSE, i, i + 1
            prev_kind = CLOSE
            i += 1
            continue
        if ch == ";":
            yield SEP, i, i + 1
            prev_kind = SEP
            i += 1
            continue
        for op in _OPERATORS:
            if src.startswith(op, i):
                yield OP, i, i + len(op)
                prev_kind = OP
                i += len(op)
                break
        else:
            # unknown punctuation (e.g. a stray backslash): treat as an operator
            yield OP, i, i + 1
            prev_kind = OP
            i += 1


def tokenize(src: str) -> list[Token]:
    """Tokenize ``src``, annotating each token with its bracket depth."""
    tokens = []
    depth = 0
    for kind, start, end in _iter_raw(src):
        if kind == CLOSE:
            depth = max(0, depth - 1)
        tokens.append(Token(kind, src[start:end], start, end, depth))
        if kind == OPEN:
            depth += 1
    return tokens


def after_dot(tokens: list[Token], i: int) -> bool:
    """True if token ``i`` is a method name, i.e. follows ``.``/``&.``/``::``."""
    return i > 0 and tokens[i - 1].kind == OP and tokens[i - 1].text in (".", "&.", "::")


def statements(tokens: list[Token]) -> Iterator[list[Token]]:
    """Split a token list at top-level ``;`` and newlines."""
    chunk: list[Token] = []
    for tok in tokens:
        if tok.kind == SEP and tok.depth == 0:
            if chunk:
                yield chunk
            chunk = []
        else:
            chunk.append(tok)
    if chunk:
        yield chunk


def identifiers(src: str) -> list[str]:
    """All identifier tokens in ``src`` outside string literals and comments."""
    return [tok.text for tok in tokenize(src) if tok.kind == IDENT]

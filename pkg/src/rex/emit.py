"""Render a :class:`ContextTree` as an RSpec suite or as a JSON IR."""

from __future__ import annotations

import json
import re

from .synthesis import DEFAULT_CONTEXT_NAME, Assertion, ContextTree, MaskedPattern, TestCase

INDENT = "  "
RENDER_METHODS = ("inspect", "to_s")
_CONSTANT_RE = re.compile(r"^[A-Z]\w*(?:::[A-Z]\w*)*$")
_RUBY_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\t": "\\t", "\r": "\\r", "\f": "\\f", "\v": "\\v"}


def ruby_string(text: str) -> str:
    """Double-quoted Ruby string literal for ``text`` (no interpolation)."""
    out = []
    for k, ch in enumerate(text):
        if ch in _RUBY_ESCAPES:
            out.append(_RUBY_ESCAPES[ch])
        elif ch == "#" and text[k + 1:k + 2] in ("{", "$", "@"):
            out.append("\\#")
        else:
            out.append(ch)
    return '"' + "".join(out) + '"'


def describe_target(name: str) -> str:
    """A bare constant when the context is named after one class, else a string."""
    if _CONSTANT_RE.match(name) and name != DEFAULT_CONTEXT_NAME:
        return name
    return ruby_string(name)


def render_pattern(pattern: MaskedPattern) -> str:
    if pattern.has_wildcard:
        return "/" + pattern.render() + "/"
    return ruby_string(pattern.text)


def _emit_lines(lines: list[str], text: str, depth: int) -> None:
    for line in text.split("\n"):
        lines.append(INDENT * depth + line if line else "")


def _emit_test(lines: list[str], case: TestCase, depth: int, render: str) -> None:
    lines.append(f"{INDENT * depth}it {ruby_string(case.name)} do")
    for stmt in case.statements:
        _emit_lines(lines, stmt, depth + 1)
    if case.assertion is not None:
        a = case.assertion
        lines.append(f"{INDENT * (depth + 1)}{a.subject}.{render}.should match {render_pattern(a.pattern)}")
    lines.append(f"{INDENT * depth}end")


def _emit_context(lines: list[str], tree: ContextTree, depth: int, render: str) -> None:
    lines.append(f"{INDENT * depth}describe {describe_target(tree.name)} do")
    blocks = 0
    if tree.setup:
        lines.append(f"{INDENT * (depth + 1)}before :each do")
        for stmt in tree.setup:
            _emit_lines(lines, stmt, depth + 2)
        lines.append(f"{INDENT * (depth + 1)}end")
        blocks += 1
    for child in tree.children:
        if blocks:
            lines.append("")
        _emit_context(lines, child, depth + 1, render)
        blocks += 1
    for case in tree.tests:
        if blocks:
            lines.append("")
        _emit_test(lines, case, depth + 1, render)
        blocks += 1
    lines.append(f"{INDENT * depth}end")


def emit_rspec(tree: ContextTree, render: str = "inspect") -> str:
    """RSpec source for ``tree``; empty string when it holds no tests."""
    if render not in RENDER_METHODS:
        raise ValueError(f"render must be one of {RENDER_METHODS}, got {render!r}")
    if not tree.all_tests():
        return ""
    lines = list(tree.imports)
    _emit_context(lines, tree, 0, render)
    return "\n".join(lines) + "\n"


def tree_to_dict(tree: ContextTree) -> dict:
    return {
        "name": tree.name,
        "imports": list(tree.imports),
        "setup": list(tree.setup),
        "children": [tree_to_dict(c) for c in tree.children],
        "tests": [
            {
                "name": case.name,
                "statements": list(case.statements),
                "assertion": None
                if case.assertion is None
                else {"subject": case.assertion.subject, "pattern": case.assertion.pattern.to_json()},
                "smoke": case.smoke,
            }
            for case in tree.tests
        ],
    }


def tree_from_dict(data: dict) -> ContextTree:
    tests = []
    for t in data["tests"]:
        a = t["assertion"]
        assertion = None if a is None else Assertion(a["subject"], MaskedPattern.from_json(a["pattern"]))
        tests.append(TestCase(t["name"], tuple(t["statements"]), assertion))
    return ContextTree(
        name=data["name"],
        imports=tuple(data["imports"]),
        setup=tuple(data["setup"]),
        children=tuple(tree_from_dict(c) for c in data["children"]),
        tests=tuple(tests),
    )


def emit_json_ir(tree: ContextTree) -> str:
    """Compact, key-ordered JSON encoding of ``tree``."""
    return json.dumps(tree_to_dict(tree), separators=(",", ":"), ensure_ascii=False)


def load_json_ir(text: str) -> ContextTree:
    return tree_from_dict(json.loads(text))

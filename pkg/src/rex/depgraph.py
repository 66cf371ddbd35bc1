"""Variable def/use analysis, last-result resolution and context grouping.

REPL users keep state in top-level variables, so two bursts that touch the
same variable are likely exercising the same fixture.  This module finds those
shared definitions, hoists them into enclosing contexts and nests the tests
by which definitions they need.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import count
from typing import Iterable, Mapping, NamedTuple

from . import lexer
from .errors import DanglingUnderscore
from .sessionizer import Burst
from .synthesis import (
    ContextTree,
    MaskedPattern,
    TestCase,
    filter_for_emission,
    name_context,
    name_test,
    synthesize_assertion,
)
from .transcript import Session

LAST_RESULT = "_"
FRESH_BASE = ("x", "y", "z")


class DefUse(NamedTuple):
    defs: tuple[str, ...]
    uses: tuple[str, ...]


def _ordered(names: Iterable[str]) -> tuple[str, ...]:
    return tuple(dict.fromkeys(names))


def _assigned_names(stmt: list[lexer.Token]) -> list[str]:
    """Variables on the left of top-level assignment operators in one statement."""
    names: list[str] = []
    lhs_start = 0
    for i, tok in enumerate(stmt):
        if tok.kind != lexer.OP or tok.depth != 0 or tok.text not in lexer.ASSIGN_OPS:
            continue
        lhs = stmt[lhs_start:i]
        lhs_start = i + 1
        if not lhs:
            continue
        if all(t.is_variable or (t.kind == lexer.OP and t.text in (",", "*")) for t in lhs):
            names.extend(t.text for t in lhs if t.is_variable)
    return names


def extract_defs_uses(source: str) -> DefUse:
    """Lexically extract the variables ``source`` assigns and reads.

    >>> extract_defs_uses("a = Rational(1,3)")
    DefUse(defs=('a',), uses=())
    >>> extract_defs_uses("a == b")
    DefUse(defs=(), uses=('a', 'b'))
    """
    tokens = lexer.tokenize(source)
    defs = _ordered(name for stmt in lexer.statements(tokens) for name in _assigned_names(stmt))
    uses = _ordered(
        tok.text
        for i, tok in enumerate(tokens)
        if tok.is_variable and not lexer.after_dot(tokens, i) and tok.text not in defs
    )
    return DefUse(defs, uses)


def simple_assignment_target(source: str) -> str | None:
    """``v`` if ``source`` is a single statement of the form ``v <op>= expr``."""
    tokens = lexer.tokenize(source)
    if len(list(lexer.statements(tokens))) != 1 or len(tokens) < 3:
        return None
    head, op = tokens[0], tokens[1]
    if head.is_variable and head.text != LAST_RESULT and op.kind == lexer.OP and op.text in lexer.ASSIGN_OPS:
        return head.text
    return None


@dataclass(frozen=True)
class VariableFacts:
    """Per-instruction def/use sets for a whole session.

    ``uses`` only lists names some earlier instruction defined, plus ``_``.
    ``last_result`` maps an instruction using ``_`` to the instruction whose
    value it refers to.
    """

    defs: Mapping[int, tuple[str, ...]]
    uses: Mapping[int, tuple[str, ...]]
    last_result: Mapping[int, int] = field(default_factory=dict)

    def reaching(self, index: int) -> dict[str, int]:
        """Map each variable used by ``index`` to the instruction defining it."""
        found = {}
        for name in self.uses.get(index, ()):
            if name == LAST_RESULT:
                continue
            for j in range(index - 1, -1, -1):
                if name in self.defs.get(j, ()):
                    found[name] = j
                    break
        return found


def analyze_session(session: Session) -> VariableFacts:
    """Compute :class:`VariableFacts`; erroring instructions count too."""
    defs: dict[int, tuple[str, ...]] = {}
    uses: dict[int, tuple[str, ...]] = {}
    links: dict[int, int] = {}
    seen: set[str] = set()
    last_ok: int | None = None
    for ins in session.instructions:
        du = extract_defs_uses(ins.source)
        defs[ins.index] = du.defs
        uses[ins.index] = tuple(n for n in du.uses if n in seen or n == LAST_RESULT)
        if LAST_RESULT in du.uses and last_ok is not None:
            links[ins.index] = last_ok
        seen.update(du.defs)
        if ins.error is None:
            last_ok = ins.index
    return VariableFacts(defs, uses, links)


def session_identifiers(session: Session) -> frozenset[str]:
    return frozenset(name for ins in session.instructions for name in lexer.identifiers(ins.source))


def fresh_names(reserved: Iterable[str] = ()):
    """Yield x, y, z, x2, y2, z2, ... skipping anything in ``reserved``."""
    reserved = set(reserved)
    for n in count(1):
        suffix = "" if n == 1 else str(n)
        for base in FRESH_BASE:
            name = base + suffix
            if name not in reserved:
                yield name


def replace_last_result(source: str, name: str) -> str:
    spans = [(t.start, t.end) for t in lexer.tokenize(source) if t.kind == lexer.IDENT and t.text == LAST_RESULT]
    for start, end in reversed(spans):
        source = source[:start] + name + source[end:]
    return source


def uses_last_result(source: str) -> bool:
    return any(t.kind == lexer.IDENT and t.text == LAST_RESULT for t in lexer.tokenize(source))


@dataclass(frozen=True)
class RewrittenBurst:
    burst: Burst
    statements: tuple[str, ...]
    fresh_names: tuple[str, ...]
    subject: str | None = None

    @property
    def indices(self) -> tuple[int, ...]:
        return self.burst.indices


def resolve_last_result(burst: Burst, reserved: Iterable[str] | None = None) -> RewrittenBurst:
    """Replace ``_`` with named variables so the burst replays as a script.

    ``_`` refers to the nearest earlier instruction in the burst that did not
    raise.  If that instruction is already ``v = expr`` the reference becomes
    ``v``; otherwise the instruction is rewritten to ``fresh = expr``.  The
    final instruction is always given a name so it can be asserted on.
    """
    instructions = burst.instructions
    if reserved is None:
        reserved = {name for ins in instructions for name in lexer.identifiers(ins.source)}
    targets: dict[int, int] = {}
    last_ok: int | None = None
    for pos, ins in enumerate(instructions):
        if uses_last_result(ins.source):
            if last_ok is not None:
                targets[pos] = last_ok
            elif ins.error is None:
                raise DanglingUnderscore(ins.index)
        if ins.error is None:
            last_ok = pos

    final = len(instructions) - 1
    needs_name = set(t for p, t in targets.items() if instructions[p].error is None)
    if instructions and instructions[final].error is None:
        needs_name.add(final)

    names = fresh_names(reserved)
    bound: dict[int, str] = {}
    wrapped: set[int] = set()
    used: list[str] = []
    for pos in sorted(needs_name):
        var = simple_assignment_target(instructions[pos].source)
        if var is None:
            var = next(names)
            used.append(var)
            wrapped.add(pos)
        bound[pos] = var

    statements = []
    for pos, ins in enumerate(instructions):
        source = ins.source
        if pos in targets and targets[pos] in bound:
            source = replace_last_result(source, bound[targets[pos]])
        if pos in wrapped:
            source = f"{bound[pos]} = {source}"
        statements.append(source)
    subject = bound.get(final) if instructions and instructions[final].error is None else None
    return RewrittenBurst(burst, tuple(statements), tuple(used), subject)


def is_import(statement: str) -> bool:
    tokens = lexer.tokenize(statement)
    if not tokens or tokens[0].kind != lexer.IDENT:
        return False
    head = tokens[0].text
    if head in ("require", "require_relative", "import"):
        return len(tokens) > 1
    return head == "from" and any(t.text == "import" for t in tokens)


@dataclass(frozen=True)
class DependencyGroup:
    shared_vars: frozenset[str]
    members: tuple[int, ...]


@dataclass
class _Test:
    order: int
    body: list[tuple[int, str]]
    case: TestCase
    deps: frozenset[int]


def _hoisted_sites(rewritten: list[RewrittenBurst], facts: VariableFacts) -> set[int]:
    """Definitions needed outside their own burst, closed under their own uses."""
    burst_of = {i: k for k, rb in enumerate(rewritten) for i in rb.indices}
    sites: set[int] = set()
    for i, k in burst_of.items():
        for j in facts.reaching(i).values():
            if burst_of.get(j) is not None and burst_of[j] != k:
                sites.add(j)
    frontier = list(sites)
    while frontier:
        i = frontier.pop()
        for j in _needs(i, facts):
            if j in burst_of and j not in sites:
                sites.add(j)
                frontier.append(j)
    return sites


def _needs(index: int, facts: VariableFacts) -> set[int]:
    needed = set(facts.reaching(index).values())
    if index in facts.last_result:
        needed.add(facts.last_result[index])
    return needed


def _closure(start: Iterable[int], sites: set[int], facts: VariableFacts) -> frozenset[int]:
    out: set[int] = set()
    frontier = [i for i in start if i in sites]
    while frontier:
        i = frontier.pop()
        if i in out:
            continue
        out.add(i)
        frontier.extend(j for j in _needs(i, facts) if j in sites)
    return frozenset(out)


def group_by_dependencies(
    deps: Mapping[int, frozenset[int]], inherited: frozenset[int] = frozenset()
) -> tuple[frozenset[int], list[tuple[int, list[int]]], list[int]]:
    """One level of the recursive grouping.

    Returns the definition sites every test needs (beyond ``inherited``), the
    child partitions as ``(site, members)`` ordered by how widely the site is
    shared, and the tests left as leaves.
    """
    members = sorted(deps)
    common = frozenset.intersection(*(deps[t] for t in members)) - inherited if members else frozenset()
    scope = inherited | common
    remaining = [t for t in members if deps[t] - scope]
    leaves = [t for t in members if not deps[t] - scope]
    children = []
    while remaining:
        tally: dict[int, int] = {}
        for t in remaining:
            for site in deps[t] - scope:
                tally[site] = tally.get(site, 0) + 1
        site = min(tally, key=lambda s: (-tally[s], s))
        group = [t for t in remaining if site in deps[t]]
        children.append((site, group))
        remaining = [t for t in remaining if site not in deps[t]]
    return common, children, leaves


def build_context_tree(
    bursts: list[RewrittenBurst],
    facts: VariableFacts,
    masks: Mapping[int, MaskedPattern] | None = None,
) -> ContextTree:
    """Group rewritten bursts into nested contexts by shared definitions.

    Imports are hoisted to the root.  Definitions every test in a group needs
    become that group's ``before`` setup; the rest of the tests are split by
    the most widely shared remaining definition, recursively.  Statements that
    raised still steer the grouping but are never emitted.
    """
    masks = masks or {}
    sites = _hoisted_sites(bursts, facts)
    site_text: dict[int, str] = {}
    site_ok: dict[int, bool] = {}
    imports: list[str] = []
    tests: list[_Test] = []

    for order, rb in enumerate(bursts):
        errors = [ins.error for ins in rb.burst.instructions]
        kept, final_errored = filter_for_emission(rb, errors)
        kept_set = {i for i, err in zip(rb.indices, errors) if err is None}
        body: list[tuple[int, str]] = []
        needed: set[int] = set()
        for index, stmt in zip(rb.indices, rb.statements):
            if index in sites:
                site_text[index] = stmt
                site_ok[index] = index in kept_set
                continue
            needed.add(index)
            if index not in kept_set:
                continue
            if is_import(stmt):
                if stmt not in imports:
                    imports.append(stmt)
                continue
            body.append((index, stmt))
        final = rb.burst.instructions[-1]
        assertion = synthesize_assertion(rb, final.outputs, final_errored, masks.get(final.index))
        if not body and assertion is None:
            continue
        start: set[int] = set()
        for index in needed:
            start |= _needs(index, facts)
        if assertion is not None and final.index in sites:
            start.add(final.index)
        statements = [s for _, s in body]
        case = TestCase(name_test(statements), tuple(statements), assertion)
        tests.append(_Test(order, body, case, _closure(start, sites, facts)))

    deps = {t.order: t.deps for t in tests}
    by_order = {t.order: t for t in tests}

    def setup_lines(group_sites: Iterable[int]) -> tuple[str, ...]:
        return tuple(site_text[s] for s in sorted(group_sites) if site_ok.get(s))

    def build(members: list[int], inherited: frozenset[int]) -> ContextTree:
        common, partitions, leaves = group_by_dependencies({t: deps[t] for t in members}, inherited)
        scope = inherited | common
        children = tuple(build(group, scope) for _, group in partitions)
        setup = setup_lines(common)
        leaf_cases = tuple(by_order[t].case for t in leaves)
        statements = list(setup)
        for child in children:
            statements.extend(_all_statements(child))
        for case in leaf_cases:
            statements.extend(case.statements)
        return ContextTree(name_context(statements), (), setup, children, leaf_cases)

    if not tests:
        return ContextTree(imports=tuple(imports))
    root = build(sorted(deps), frozenset())
    return ContextTree(root.name, tuple(imports), root.setup, root.children, root.tests)


def dependency_groups(bursts: list[RewrittenBurst], facts: VariableFacts) -> list[DependencyGroup]:
    """Flat view of the top-level partition: which bursts share which variables."""
    sites = _hoisted_sites(bursts, facts)
    deps = {}
    for k, rb in enumerate(bursts):
        start: set[int] = set()
        for i in rb.indices:
            if i not in sites:
                start |= _needs(i, facts)
        deps[k] = _closure(start, sites, facts)
    if not deps:
        return []
    common, partitions, _ = group_by_dependencies(deps)
    groups = []
    if common:
        groups.append(
            DependencyGroup(frozenset(n for s in common for n in facts.defs.get(s, ())), tuple(sorted(deps)))
        )
    for site, members in partitions:
        groups.append(DependencyGroup(frozenset(facts.defs.get(site, ())), tuple(members)))
    return groups


def _all_statements(tree: ContextTree) -> list[str]:
    out = list(tree.setup)
    for child in tree.children:
        out.extend(_all_statements(child))
    for case in tree.tests:
        out.extend(case.statements)
    return out

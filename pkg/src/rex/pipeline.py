"""End-to-end extraction: session -> bursts -> rewritten bursts -> tree."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Mapping

from .depgraph import analyze_session, build_context_tree, resolve_last_result, session_identifiers
from .errors import DanglingUnderscore, RexWarning
from .sessionizer import DEFAULT_BURST_GAP, split_bursts
from .synthesis import ContextTree, MaskedPattern, mask_outputs
from .transcript import Session


@dataclass
class Extraction:
    tree: ContextTree
    warnings: list[str] = field(default_factory=list)
    bursts: int = 0


def extract(
    session: Session,
    burst_gap: int = DEFAULT_BURST_GAP,
    masks: Mapping[int, MaskedPattern] | None = None,
) -> Extraction:
    """Run the whole pipeline.  Heuristic problems become warnings, not errors."""
    messages: list[str] = []
    if not session.instructions:
        return Extraction(ContextTree(), ["no instructions"])
    bursts = split_bursts(session, burst_gap)
    facts = analyze_session(session)
    reserved = session_identifiers(session)
    rewritten = []
    for burst in bursts:
        try:
            rewritten.append(resolve_last_result(burst, reserved))
        except DanglingUnderscore as exc:
            messages.append(f"{exc}; burst skipped")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", RexWarning)
        tree = build_context_tree(rewritten, facts, masks)
    messages.extend(str(w.message) for w in caught if issubclass(w.category, RexWarning))
    return Extraction(tree, messages, len(bursts))


class MaskMismatch(ValueError):
    def __init__(self, index: int, reason: str) -> None:
        super().__init__(f"instruction {index}: {reason}")
        self.index = index


def mask_sessions(original: Session, replay: Session) -> list[MaskedPattern | None]:
    """Pair instructions by index and diff their final outputs.

    ``None`` marks a pair where neither run printed anything.
    """
    for k, (a, b) in enumerate(zip(original.instructions, replay.instructions)):
        if a.source != b.source:
            raise MaskMismatch(k, f"sources differ ({a.source!r} vs {b.source!r})")
    if len(original.instructions) != len(replay.instructions):
        k = min(len(original.instructions), len(replay.instructions))
        raise MaskMismatch(
            k,
            f"instruction counts differ ({len(original.instructions)} vs {len(replay.instructions)})",
        )
    patterns = []
    for a, b in zip(original.instructions, replay.instructions):
        if a.observable is None and b.observable is None:
            patterns.append(None)
        else:
            patterns.append(mask_outputs(a.observable or "", b.observable or ""))
    return patterns


def parse_masks(text: str, expected: int | None = None) -> dict[int, MaskedPattern]:
    """Read a ``rex mask`` output file: one rendered pattern per instruction.

    Blank lines mean "no mask" for that instruction.
    """
    lines = text.replace("\r\n", "\n").split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if expected is not None and len(lines) != expected:
        raise ValueError(f"mask file has {len(lines)} lines but the transcript has {expected} instructions")
    return {index: MaskedPattern.parse(line) for index, line in enumerate(lines) if line}

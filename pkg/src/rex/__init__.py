"""Extract scripted unit tests from recorded REPL sessions."""

from .depgraph import analyze_session, build_context_tree, extract_defs_uses, resolve_last_result
from .emit import emit_json_ir, emit_rspec, load_json_ir
from .lcs import BACKEND
from .pipeline import extract, mask_sessions
from .sessionizer import Burst, split_bursts
from .synthesis import ContextTree, MaskedPattern, TestCase, mask_outputs, name_context, name_test
from .transcript import Instruction, Session, dump_events, load_events, parse_transcript

__all__ = [
    "BACKEND",
    "Burst",
    "ContextTree",
    "Instruction",
    "MaskedPattern",
    "Session",
    "TestCase",
    "analyze_session",
    "build_context_tree",
    "dump_events",
    "emit_json_ir",
    "emit_rspec",
    "extract",
    "extract_defs_uses",
    "load_events",
    "load_json_ir",
    "mask_outputs",
    "mask_sessions",
    "name_context",
    "name_test",
    "parse_transcript",
    "resolve_last_result",
    "split_bursts",
]

"""Temporal clustering of a session into exploratory-testing bursts."""

from __future__ import annotations

from dataclasses import dataclass

from .transcript import Instruction, Session

DEFAULT_BURST_GAP = 90


@dataclass(frozen=True)
class Burst:
    instructions: tuple[Instruction, ...]

    @property
    def start(self) -> int:
        return self.instructions[0].timestamp

    @property
    def end(self) -> int:
        return self.instructions[-1].timestamp

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(ins.index for ins in self.instructions)


def split_bursts(session: Session, threshold_seconds: int = DEFAULT_BURST_GAP) -> list[Burst]:
    """Split instructions wherever two consecutive prompts are more than
    ``threshold_seconds`` apart.

    Over sorted 1-D timestamps this is exactly single-linkage agglomerative
    clustering cut at ``threshold_seconds``: two instructions share a cluster
    iff no gap between them exceeds the threshold.  A gap equal to the
    threshold keeps instructions together.
    """
    if threshold_seconds < 1:
        raise ValueError("threshold_seconds must be >= 1")
    bursts: list[Burst] = []
    run: list[Instruction] = []
    for ins in session.instructions:
        if run and ins.timestamp - run[-1].timestamp > threshold_seconds:
            bursts.append(Burst(tuple(run)))
            run = []
        run.append(ins)
    if run:
        bursts.append(Burst(tuple(run)))
    return bursts

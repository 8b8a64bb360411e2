"""Cue editing for mental blocks, and brainstorm enumeration.

Removal follows cue-list order, one cue at a time, each restored before
the next is tried (a shift-register counter gating one cue per pass).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from assocbrain.ltm import LongTermMemory, SearchCues


@dataclass
class EditPass:
    removed: tuple[str, ...]
    outcome: str
    matches: tuple[int, ...] = ()


@dataclass
class EditTrace:
    passes: list[EditPass] = field(default_factory=list)
    resolved: tuple[tuple[str, ...], list[int]] | None = None

    @property
    def resolved_at(self) -> int | None:
        return len(self.passes) - 1 if self.resolved is not None else None


def edit_and_search(ltm: LongTermMemory, cues: SearchCues, policy: str = "first",
                    pair_removal: bool = False, score=None):
    """Search, removing cues until something is recalled.

    Returns ``(delivered word indices, EditTrace)``; an unbreakable block
    gives an empty delivery.
    """
    if not len(cues):
        raise ValueError("cue editing needs at least one cue")
    trace = EditTrace()
    names = cues.fields()

    trials = [()]
    trials += [(i,) for i in range(len(cues))]
    if pair_removal:
        trials += list(combinations(range(len(cues)), 2))

    for drop in trials:
        reduced = cues.without(*drop)
        outcome = ltm.search(reduced)
        removed = tuple(names[i] for i in drop)
        trace.passes.append(EditPass(removed, outcome.kind, outcome.matches))
        if outcome.recalled:
            delivered = ltm.deliver(outcome, policy, reduced, score=score)
            trace.resolved = (removed, delivered)
            return delivered, trace
    return [], trace


def brainstorm(ltm: LongTermMemory, cues: SearchCues):
    """Match sets for the full cue set and for each single-cue removal."""
    if not len(cues):
        raise ValueError("brainstorm needs at least one cue")
    names = cues.fields()
    out = [((), frozenset(ltm.match_indices(cues)))]
    for i in range(len(cues)):
        out.append(((names[i],), frozenset(ltm.match_indices(cues.without(i)))))
    return out

"""Importance encoder and the repression gate."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ImportanceRecord:
    cue_count: int
    attribute_count: int
    location_map: frozenset[int]
    irrational_count: int

    def __post_init__(self):
        if self.irrational_count > self.attribute_count:
            raise ValueError("irrational_count exceeds attribute_count")
        if len(self.location_map) != self.attribute_count:
            raise ValueError("location_map size must equal attribute_count")


def encode_importance(word, cues, schema) -> ImportanceRecord:
    locations = frozenset(schema.index(name) for name in word.values)
    irrational = sum(1 for name in word.values if schema.kind(name) == "irrational")
    return ImportanceRecord(len(cues), len(locations), locations, irrational)


def gate(record: ImportanceRecord, limit: int, dream_mode: bool = False) -> bool:
    """True if the recall may reach STM; False means repressed."""
    if dream_mode:
        return True
    return record.irrational_count <= limit


def attribute_count_score(record: ImportanceRecord):
    return record.attribute_count


def select_most_important(ltm, matches, cues, schema, score=None) -> int:
    """Index of the match with the highest score; earliest index wins ties."""
    matches = list(matches)
    if not matches:
        raise ValueError("no matches to choose from")
    score = score or attribute_count_score
    best, best_score = None, None
    for i in sorted(matches):
        s = score(encode_importance(ltm[i], cues, schema))
        if best is None or s > best_score:
            best, best_score = i, s
    return best

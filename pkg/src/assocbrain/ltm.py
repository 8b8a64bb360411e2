"""Write-once associative long-term memory.

Words are searched by exact masked match on the fields a cue set names. A
cue on a field that a word does not define is a mismatch, so an imagined
cue blocks recall until the cue editor removes it.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from typing import Iterable, Iterator

from assocbrain import kernels
from assocbrain.errors import MultipleMatch, NoRecall, SchemaError, WriteOnceViolation
from assocbrain.memory import AttributeSchema, encode_value

ACTION_CODES = {"Right": 1, "Left": 2, "Straight": 3}
ACTION_NAMES = {v: k for k, v in ACTION_CODES.items()}

OPERATOR_CODES = {"plus": 1, "minus": 2, "times": 3, "divide": 4}
OPERATOR_NAMES = {v: k for k, v in OPERATOR_CODES.items()}
OPERATOR_SYMBOLS = {"+": "plus", "-": "minus", "*": "times", "/": "divide"}
SYMBOL_OF = {v: k for k, v in OPERATOR_SYMBOLS.items()}

# Fields an arithmetic fact defines; the arithmetic area of STM uses the same names.
FACT_FIELDS = ("op1", "op2", "aop", "result")


def operator_code(op: str | int) -> int:
    if isinstance(op, int):
        if op not in OPERATOR_NAMES:
            raise ValueError(f"unknown operator code {op}")
        return op
    name = OPERATOR_SYMBOLS.get(op, op)
    try:
        return OPERATOR_CODES[name]
    except KeyError:
        raise ValueError(f"unknown operator {op!r}") from None


class FrozenValues(Mapping):
    """Read-only field->value map; any mutation raises WriteOnceViolation."""

    __slots__ = ("_data",)

    def __init__(self, data=()):
        object.__setattr__(self, "_data", dict(data))

    def __getitem__(self, key):
        return self._data[key]

    def __iter__(self):
        return iter(self._data)

    def __len__(self):
        return len(self._data)

    def __setitem__(self, key, value):
        raise WriteOnceViolation("committed engram values cannot be modified")

    def __delitem__(self, key):
        raise WriteOnceViolation("committed engram values cannot be erased")

    def __setattr__(self, key, value):
        raise WriteOnceViolation("committed engram values cannot be modified")

    def __repr__(self):
        return f"FrozenValues({self._data!r})"

    def __eq__(self, other):
        return isinstance(other, Mapping) and dict(self) == dict(other)

    def __hash__(self):
        return hash(frozenset(self._data.items()))


class LtmWord:
    """One engram: defined field values, an optional action tag and machine id."""

    __slots__ = ("values", "action", "machine", "committed")

    def __init__(self, values: Mapping[str, int] | None = None, action: str | None = None,
                 machine: str | None = None, committed: bool = False):
        object.__setattr__(self, "values", FrozenValues(values or {}))
        object.__setattr__(self, "action", action)
        object.__setattr__(self, "machine", machine)
        object.__setattr__(self, "committed", committed)

    def __setattr__(self, key, value):
        if self.committed:
            raise WriteOnceViolation(f"cannot set {key!r} on a committed engram")
        if key == "values":
            value = FrozenValues(value)
        object.__setattr__(self, key, value)

    def __delattr__(self, key):
        raise WriteOnceViolation(f"cannot delete {key!r} on an engram")

    def __eq__(self, other):
        if not isinstance(other, LtmWord):
            return NotImplemented
        return (self.values, self.action, self.machine) == (other.values, other.action, other.machine)

    def __hash__(self):
        return hash((self.values, self.action, self.machine))

    def __repr__(self):
        extra = f", action={self.action!r}" if self.action else ""
        if self.machine:
            extra += f", machine={self.machine!r}"
        return f"LtmWord({dict(self.values)!r}{extra})"

    def content(self):
        return (tuple(sorted(self.values.items())), self.action)

    def render(self) -> str:
        parts = [f"{k}={v}" for k, v in self.values.items()]
        if self.action and "action" not in self.values:
            parts.append(f"action={self.action}")
        return " ".join(parts)


def engram(action: str | None = None, **values: int) -> LtmWord:
    """Build a word; an action tag is also stored in the ``action`` field."""
    if action is not None:
        values.setdefault("action", ACTION_CODES[action])
    return LtmWord(values, action=action)


class SearchCues:
    """Ordered (field, value) cues; the order is the editor's removal order."""

    __slots__ = ("items",)

    def __init__(self, items: Iterable[tuple[str, int]] | Mapping[str, int] = ()):
        if isinstance(items, Mapping):
            items = items.items()
        items = tuple((str(f), int(v)) for f, v in items)
        seen = set()
        for f, _ in items:
            if f in seen:
                raise ValueError(f"cue field {f!r} appears twice")
            seen.add(f)
        self.items = items

    def __iter__(self) -> Iterator[tuple[str, int]]:
        return iter(self.items)

    def __len__(self):
        return len(self.items)

    def __eq__(self, other):
        return isinstance(other, SearchCues) and self.items == other.items

    def __hash__(self):
        return hash(self.items)

    def __repr__(self):
        return f"SearchCues({dict(self.items)!r})"

    def fields(self) -> tuple[str, ...]:
        return tuple(f for f, _ in self.items)

    def as_dict(self) -> dict[str, int]:
        return dict(self.items)

    def without(self, *positions: int) -> SearchCues:
        drop = set(positions)
        return SearchCues(c for i, c in enumerate(self.items) if i not in drop)

    def render(self) -> str:
        return ",".join(f"{f}={v}" for f, v in self.items) or "-"


@dataclass(frozen=True)
class SearchOutcome:
    kind: str  # "no_recall" | "single" | "multiple"
    matches: tuple[int, ...] = ()

    def __post_init__(self):
        n = len(self.matches)
        expected = {"no_recall": n == 0, "single": n == 1, "multiple": n >= 2}
        if not expected.get(self.kind, False):
            raise ValueError(f"inconsistent outcome {self.kind} with {n} matches")
        if list(self.matches) != sorted(set(self.matches)):
            raise ValueError("match indices must ascend")

    @classmethod
    def of(cls, matches: Iterable[int]) -> SearchOutcome:
        matches = tuple(matches)
        kind = ("no_recall", "single")[len(matches)] if len(matches) < 2 else "multiple"
        return cls(kind, matches)

    @property
    def count(self) -> int:
        return len(self.matches)

    @property
    def recalled(self) -> bool:
        return self.kind != "no_recall"


class LongTermMemory:
    """Append-only associative store. Storage order is commit order."""

    def __init__(self, schema: AttributeSchema, rehearsal_threshold: int = 3,
                 backend: str | None = None):
        if rehearsal_threshold < 1:
            raise ValueError("rehearsal_threshold must be >= 1")
        self.schema = schema
        self.rehearsal_threshold = rehearsal_threshold
        self._words: list[LtmWord] = []
        self._kernel = kernels.get_backend(schema.bus_width, backend)
        self._defined = kernels.pack([], schema.bus_width)
        self._values = kernels.pack([], schema.bus_width)
        self.machines: dict = {}

    def __len__(self):
        return len(self._words)

    def __iter__(self):
        return iter(self._words)

    def __getitem__(self, index: int) -> LtmWord:
        return self._words[index]

    def __setitem__(self, index, word):
        raise WriteOnceViolation(f"word {index} is committed and cannot be overwritten")

    def __delitem__(self, index):
        raise WriteOnceViolation(f"word {index} is committed and cannot be erased")

    @property
    def words(self) -> tuple[LtmWord, ...]:
        return tuple(self._words)

    def _check(self, word: LtmWord):
        for name, value in word.values.items():
            if name not in self.schema:
                raise SchemaError(f"engram field {name!r} is not in the schema")
            encode_value(self.schema, name, value)

    def memorize(self, word: LtmWord, rehearsals: int, address: int | None = None) -> int | None:
        """Commit ``word`` if it was rehearsed at least R times.

        Returns the new word's index, or None when not committed. Passing the
        ``address`` of an existing word is an overwrite attempt.
        """
        if address is not None and 0 <= address < len(self._words):
            raise WriteOnceViolation(f"word {address} is committed and cannot be overwritten")
        self._check(word)
        if rehearsals < self.rehearsal_threshold:
            return None
        stored = LtmWord(word.values, word.action, word.machine, committed=True)
        dmask, bits = self.schema.pack(stored.values)
        self._words.append(stored)
        self._defined.append(dmask)
        self._values.append(bits)
        return len(self._words) - 1

    def memorize_fact(self, a: int, operator: str | int, b: int, result: int,
                      rehearsals: int | None = None) -> int | None:
        r = self.rehearsal_threshold if rehearsals is None else rehearsals
        values = dict(zip(FACT_FIELDS, (a, b, operator_code(operator), result)))
        return self.memorize(LtmWord(values), r)

    def match_indices(self, cues: SearchCues) -> list[int]:
        cue_mask, cue_bits = self.schema.pack(cues.as_dict())
        return list(self._kernel.match_indices(self._defined, self._values, cue_mask, cue_bits))

    def search(self, cues: SearchCues) -> SearchOutcome:
        return SearchOutcome.of(self.match_indices(cues))

    def deliver(self, outcome: SearchOutcome, policy: str = "first",
                cues: SearchCues | None = None, score=None) -> list[int]:
        """Indices of the words to present to STM, in presentation order."""
        if not outcome.recalled:
            raise NoRecall("nothing to deliver")
        if outcome.kind == "single" or policy == "first":
            return [outcome.matches[0]]
        if policy == "sequential":
            return list(outcome.matches)
        if policy == "importance_max":
            from assocbrain.importance import select_most_important

            return [select_most_important(self, outcome.matches, cues or SearchCues(),
                                          self.schema, score=score)]
        raise ValueError(f"unknown policy {policy!r}")

    def classify_multiple(self, matches) -> str:
        """``"non_differentiating"`` when every match has identical content."""
        matches = list(matches)
        if len(matches) < 2:
            raise ValueError("classification needs at least two matches")
        first = self._words[matches[0]].content()
        if all(self._words[i].content() == first for i in matches[1:]):
            return "non_differentiating"
        return "differentiating"

    def lookup_arithmetic(self, op1: int, op2: int, operator: str | int) -> int:
        cues = SearchCues(zip(FACT_FIELDS[:3], (op1, op2, operator_code(operator))))
        outcome = self.search(cues)
        if outcome.kind == "no_recall":
            raise NoRecall(f"no fact for {op1} {operator} {op2}")
        facts = [i for i in outcome.matches if "result" in self._words[i].values]
        if len(facts) != 1:
            if not facts:
                raise NoRecall(f"no fact for {op1} {operator} {op2}")
            raise MultipleMatch(f"{len(facts)} facts for {op1} {operator} {op2}")
        return self._words[facts[0]].values["result"]

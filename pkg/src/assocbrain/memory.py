"""Attribute schema, STM register and its decay/domination semantics.

Bus layout: field ``f`` occupies bits ``[4f, 4f + 3]``, bit ``4f`` being its
least significant bit. One tick stands for 100 ms of simulated time.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Iterable, Mapping

from assocbrain.errors import SchemaError

FIELD_WIDTH = 4
TICK_MS = 100
TTL_DEFAULT = 30
POLICIES = ("first", "sequential", "importance_max")


@dataclass(frozen=True)
class FieldDescriptor:
    name: str
    kind: str = "rational"
    width: int = FIELD_WIDTH

    def __post_init__(self):
        if not self.name.isidentifier():
            raise SchemaError(f"field name {self.name!r} is not an identifier")
        if self.kind not in ("rational", "irrational"):
            raise SchemaError(f"field {self.name}: unknown kind {self.kind!r}")
        if self.width != FIELD_WIDTH:
            raise SchemaError(f"field {self.name}: width must be {FIELD_WIDTH}")


class AttributeSchema:
    """Ordered, fixed-layout list of 4-bit attribute fields."""

    def __init__(self, fields: Iterable[FieldDescriptor | str]):
        descs = tuple(f if isinstance(f, FieldDescriptor) else FieldDescriptor(f)
                      for f in fields)
        self.fields = descs
        self._index = {}
        for i, d in enumerate(descs):
            if d.name in self._index:
                raise SchemaError(f"duplicate field {d.name!r}")
            self._index[d.name] = i

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(d.name for d in self.fields)

    @property
    def bus_width(self) -> int:
        return FIELD_WIDTH * len(self.fields)

    def __len__(self):
        return len(self.fields)

    def __contains__(self, name):
        return name in self._index

    def __eq__(self, other):
        return isinstance(other, AttributeSchema) and self.fields == other.fields

    def __hash__(self):
        return hash(self.fields)

    def __repr__(self):
        return f"AttributeSchema({list(self.names)!r})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise SchemaError(f"unknown field {name!r}") from None

    def kind(self, name: str) -> str:
        return self.fields[self.index(name)].kind

    def shift(self, name: str) -> int:
        return FIELD_WIDTH * self.index(name)

    def mask(self, name: str) -> int:
        return ((1 << FIELD_WIDTH) - 1) << self.shift(name)

    def bit(self, name: str, i: int) -> int:
        """Bus index of bit ``i`` (0 = LSB) of field ``name``."""
        if not 0 <= i < FIELD_WIDTH:
            raise SchemaError(f"bit {i} outside a {FIELD_WIDTH}-bit field")
        return self.shift(name) + i

    def field_of_bit(self, bit: int) -> str:
        if not 0 <= bit < self.bus_width:
            raise SchemaError(f"bus bit {bit} out of range")
        return self.fields[bit // FIELD_WIDTH].name

    def pack(self, values: Mapping[str, int]) -> tuple[int, int]:
        """Pack a field->value map into ``(defined_mask, value_bits)``."""
        dmask = bits = 0
        for name, value in values.items():
            dmask |= self.mask(name)
            bits |= encode_value(self, name, value) << self.shift(name)
        return dmask, bits

    def unpack(self, bits: int, names: Iterable[str] | None = None) -> dict[str, int]:
        names = self.names if names is None else names
        return {n: (bits >> self.shift(n)) & 0xF for n in names}


def encode_value(schema: AttributeSchema, name: str, value: int) -> int:
    """Standard binary nibble for ``value``; LSB lands on the field's lowest bus bit."""
    width = schema.fields[schema.index(name)].width
    if not isinstance(value, int) or not 0 <= value < (1 << width):
        raise SchemaError(f"value {value!r} does not fit {width}-bit field {name!r}")
    return value


def decode_value(schema: AttributeSchema, name: str, nibble: int) -> int:
    schema.index(name)
    if not 0 <= nibble < (1 << FIELD_WIDTH):
        raise SchemaError(f"nibble {nibble!r} out of range")
    return nibble


def nibble_str(value: int) -> str:
    return format(value, "04b")


@dataclass(frozen=True)
class Config:
    ttl_default: int = TTL_DEFAULT
    rehearsal_threshold: int = 3
    repression_limit: int = 2
    dream_mode: bool = False
    multi_match_policy: str = "first"
    pair_removal: bool = False
    interchange: bool = False
    ttl_max: int | None = None

    def __post_init__(self):
        if self.ttl_default < 1:
            raise ValueError("ttl_default must be >= 1")
        if self.rehearsal_threshold < 1:
            raise ValueError("rehearsal_threshold must be >= 1")
        if self.repression_limit < 0:
            raise ValueError("repression_limit must be >= 0")
        if self.multi_match_policy not in POLICIES:
            raise ValueError(f"unknown multi_match_policy {self.multi_match_policy!r}")
        if self.ttl_max is None:
            object.__setattr__(self, "ttl_max", self.ttl_default)
        if self.ttl_max < self.ttl_default:
            raise ValueError("ttl_max must be >= ttl_default")


@dataclass(frozen=True)
class StmWord:
    """The conscious register: raw bus bits plus a remaining-ticks count per field.

    Raw bits of an expired field are kept but always read as zero.
    """

    schema: AttributeSchema
    bits: int = 0
    ttl: tuple[int, ...] = dc_field(default=())
    ttl_max: int = TTL_DEFAULT

    def __post_init__(self):
        if not self.ttl:
            object.__setattr__(self, "ttl", (0,) * len(self.schema))
        if len(self.ttl) != len(self.schema):
            raise SchemaError("ttl vector does not match schema")
        if any(t < 0 or t > self.ttl_max for t in self.ttl):
            raise ValueError(f"ttl outside [0, {self.ttl_max}]")

    @classmethod
    def empty(cls, schema: AttributeSchema, ttl_max: int = TTL_DEFAULT) -> StmWord:
        return cls(schema, 0, (0,) * len(schema), ttl_max)

    @property
    def live_mask(self) -> int:
        m = 0
        for i, t in enumerate(self.ttl):
            if t:
                m |= 0xF << (FIELD_WIDTH * i)
        return m

    @property
    def bus(self) -> int:
        """Bus as seen by readers and nanocode: expired fields read zero."""
        return self.bits & self.live_mask

    def read(self, name: str) -> int:
        i = self.schema.index(name)
        if not self.ttl[i]:
            return 0
        return (self.bits >> (FIELD_WIDTH * i)) & 0xF

    def ttl_of(self, name: str) -> int:
        return self.ttl[self.schema.index(name)]

    def values(self) -> dict[str, int]:
        return {n: self.read(n) for n in self.schema.names}

    def live_values(self) -> dict[str, int]:
        """Nonzero, unexpired fields in schema order."""
        return {n: v for n, v in self.values().items() if v}

    def with_bus(self, bus: int, ttl: int) -> StmWord:
        """Replace the bus; every field whose visible value changed gets ``ttl``."""
        old = self.bus
        ttls = list(self.ttl)
        bits = self.bits
        for i in range(len(self.schema)):
            m = 0xF << (FIELD_WIDTH * i)
            if (old ^ bus) & m:
                bits = (bits & ~m) | (bus & m)
                ttls[i] = ttl
        return StmWord(self.schema, bits, tuple(ttls), self.ttl_max)

    def render(self) -> str:
        return ",".join(f"{n}:{v}" for n, v in self.live_values().items()) or "-"


def write_field(stm: StmWord, name: str, nibble: int, ttl: int) -> StmWord:
    i = stm.schema.index(name)
    nibble = encode_value(stm.schema, name, nibble)
    if not 0 <= ttl <= stm.ttl_max:
        raise ValueError(f"ttl {ttl} outside [0, {stm.ttl_max}]")
    m = 0xF << (FIELD_WIDTH * i)
    bits = (stm.bits & ~m) | (nibble << (FIELD_WIDTH * i))
    ttls = stm.ttl[:i] + (ttl,) + stm.ttl[i + 1:]
    return StmWord(stm.schema, bits, ttls, stm.ttl_max)


def tick_decay(stm: StmWord) -> StmWord:
    if not any(stm.ttl):
        return stm
    return StmWord(stm.schema, stm.bits, tuple(t - 1 if t else 0 for t in stm.ttl),
                   stm.ttl_max)


def dominate(stm: StmWord, incoming, ttl: int) -> StmWord:
    """Overwrite every field ``incoming`` defines and refresh its ttl.

    ``incoming`` is a field->value mapping or anything with a ``values``
    mapping (an LTM word).
    """
    if isinstance(incoming, Mapping):
        values = incoming
    elif isinstance(incoming, StmWord):
        values = incoming.values()
    else:
        values = incoming.values
    for name in values:
        if name not in stm.schema:
            raise SchemaError(f"incoming field {name!r} is not in the STM schema")
    for name, value in values.items():
        stm = write_field(stm, name, value, ttl)
    return stm

"""Reversible FM/TO nanocode: assembler, verifier, executor and generators.

An op flips every TO bit when all of its FM bits are 1. FM and TO must be
disjoint, which makes each op its own inverse.

Assembly text is two lines per op::

    # move problem Y into op1
    FM 20
    TO 28
    FM
    TO 5

An empty FM line is an unconditional flip.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from assocbrain import kernels
from assocbrain.errors import AssemblyError, VerificationError
from assocbrain.memory import FIELD_WIDTH

log = logging.getLogger(__name__)


def _mask(bits) -> int:
    m = 0
    for b in bits:
        m |= 1 << b
    return m


@dataclass(frozen=True)
class NanoOp:
    fm: frozenset[int]
    to: frozenset[int]

    def __init__(self, fm=(), to=()):
        object.__setattr__(self, "fm", frozenset(fm))
        object.__setattr__(self, "to", frozenset(to))
        if not self.to:
            raise ValueError("TO set must not be empty")
        if any(b < 0 for b in self.fm | self.to):
            raise ValueError("bit indices must be non-negative")

    @property
    def fm_mask(self) -> int:
        return _mask(self.fm)

    @property
    def to_mask(self) -> int:
        return _mask(self.to)

    def lines(self) -> tuple[str, str]:
        fm = ",".join(map(str, sorted(self.fm)))
        return (f"FM {fm}" if fm else "FM", "TO " + ",".join(map(str, sorted(self.to))))


@dataclass(frozen=True)
class NanoProgram:
    ops: tuple[NanoOp, ...] = ()
    name: str = "program"
    # Bus bits that must read zero before the program runs (destination fields).
    requires_zero: int = field(default=0, compare=False)
    _packed: dict = field(default_factory=dict, init=False, repr=False, compare=False,
                          hash=False)

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))

    def __len__(self):
        return len(self.ops)

    def __iter__(self):
        return iter(self.ops)

    def __add__(self, other: NanoProgram) -> NanoProgram:
        return NanoProgram(self.ops + other.ops, self.name,
                           self.requires_zero | other.requires_zero)

    @property
    def max_bit(self) -> int:
        return max((b for op in self.ops for b in op.fm | op.to), default=-1)

    def masks(self, width: int):
        """``(fm masks, to masks)`` packed for the kernel serving ``width``."""
        key = width <= kernels.MAX_NATIVE_WIDTH
        if key not in self._packed:
            self._packed[key] = (kernels.pack([op.fm_mask for op in self.ops], width),
                                 kernels.pack([op.to_mask for op in self.ops], width))
        return self._packed[key]

    def text(self) -> str:
        out = []
        for op in self.ops:
            out.extend(op.lines())
        return "\n".join(out) + ("\n" if out else "")


def _parse_indices(rest: str, lineno: int) -> list[int]:
    rest = rest.strip()
    if not rest:
        return []
    out = []
    for tok in rest.split(","):
        tok = tok.strip()
        if not tok.isdigit():
            raise AssemblyError(f"malformed bit index {tok!r}", lineno)
        out.append(int(tok))
    return out


def assemble(text: str, name: str = "program", first_line: int = 1) -> NanoProgram:
    lines = []
    for n, raw in enumerate(text.splitlines(), start=first_line):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((n, line))
    if len(lines) % 2:
        raise AssemblyError(f"odd number of nanocode lines ({len(lines)})", lines[-1][0])
    ops = []
    for (n1, fm_line), (n2, to_line) in zip(lines[::2], lines[1::2]):
        head1, _, rest1 = fm_line.partition(" ")
        head2, _, rest2 = to_line.partition(" ")
        if head1.upper() != "FM" or head2.upper() != "TO":
            raise AssemblyError("expected an FM line followed by a TO line (FM/TO out of order)", n1)
        fm = _parse_indices(rest1, n1)
        to = _parse_indices(rest2, n2)
        if not to:
            raise AssemblyError("TO line is empty", n2)
        ops.append(NanoOp(fm, to))
    return NanoProgram(tuple(ops), name)


def disassemble(program: NanoProgram) -> str:
    return program.text()


def verify(program: NanoProgram, bus_width: int) -> list[str]:
    """Violations as messages; an empty list means the program is sound."""
    problems = []
    for k, op in enumerate(program.ops):
        overlap = op.fm & op.to
        if overlap:
            problems.append(f"op {k}: FM and TO overlap at bit(s) {sorted(overlap)}")
        outside = sorted(b for b in op.fm | op.to if b >= bus_width)
        if outside:
            problems.append(f"op {k}: bit(s) {outside} outside {bus_width}-bit bus")
    return problems


def check(program: NanoProgram, bus_width: int) -> NanoProgram:
    problems = verify(program, bus_width)
    if problems:
        raise VerificationError(problems)
    return program


def step(bits: int, op: NanoOp) -> int:
    cond = op.fm_mask
    if bits & cond == cond:
        return bits ^ op.to_mask
    return bits


def precondition_violations(bits: int, program: NanoProgram) -> int:
    """Bits that should be zero before ``program`` runs but are set."""
    return bits & program.requires_zero


def run(bits: int, program: NanoProgram, width: int | None = None,
        check_preconditions: bool = False, backend: str | None = None) -> int:
    width = max(width or 0, program.max_bit + 1, bits.bit_length())
    if check_preconditions and precondition_violations(bits, program):
        log.warning("%s: destination not zero (mask %#x); result is an XOR",
                    program.name, precondition_violations(bits, program))
    kernel = kernels.get_backend(width, backend)
    fm, to = program.masks(width)
    return kernel.run_masks(bits, fm, to)


def run_reverse(bits: int, program: NanoProgram, width: int | None = None,
                backend: str | None = None) -> int:
    """Same as ``run(bits, reverse(program))`` without building the reversal."""
    width = max(width or 0, program.max_bit + 1, bits.bit_length())
    fm, to = program.masks(width)
    return kernels.get_backend(width, backend).run_masks_reverse(bits, fm, to)


def run_many(states, program: NanoProgram, width: int, backend: str | None = None) -> list[int]:
    kernel = kernels.get_backend(width, backend)
    fm, to = program.masks(width)
    return kernel.run_masks_many(kernels.pack(states, width), fm, to)


def reverse(program: NanoProgram) -> NanoProgram:
    return NanoProgram(program.ops[::-1], program.name, program.requires_zero)


def emit_copy(schema, src: str, dst: str, name: str | None = None) -> NanoProgram:
    if src == dst:
        raise ValueError("source and destination fields must differ")
    ops = [NanoOp([schema.bit(src, i)], [schema.bit(dst, i)]) for i in range(FIELD_WIDTH)]
    return NanoProgram(tuple(ops), name or f"copy_{src}_{dst}", schema.mask(dst))


def emit_move(schema, src: str, dst: str, name: str | None = None) -> NanoProgram:
    """Copy ``src`` into an all-zero ``dst``, then clear ``src`` using ``dst``."""
    copy = emit_copy(schema, src, dst)
    clear = [NanoOp([schema.bit(dst, i)], [schema.bit(src, i)]) for i in range(FIELD_WIDTH)]
    return NanoProgram(copy.ops + tuple(clear), name or f"move_{src}_{dst}", schema.mask(dst))


def emit_swap_bits(a: int, b: int, name: str | None = None) -> NanoProgram:
    if a == b:
        raise ValueError("cannot swap a bit with itself")
    ops = (NanoOp([a], [b]), NanoOp([b], [a]), NanoOp([a], [b]))
    return NanoProgram(ops, name or f"swap_{a}_{b}")


def emit_set_bits(bits, name: str = "set") -> NanoProgram:
    """Unconditional flips; sets the bits when they start at zero."""
    bits = sorted(bits)
    return NanoProgram(tuple(NanoOp((), [b]) for b in bits), name, _mask(bits))


def parse_bus(text: str, width: int | None = None) -> tuple[int, int]:
    """Parse a bus given MSB-first as a 0/1 string, or as ``0x`` hex.

    Returns ``(bits, width)``.
    """
    text = text.strip().replace("_", "")
    if text.lower().startswith("0x"):
        bits = int(text, 16)
        w = width or max(4 * (len(text) - 2), bits.bit_length())
    else:
        if not text or set(text) - {"0", "1"}:
            raise ValueError(f"bus {text!r} is not a binary string")
        bits = int(text, 2)
        w = width or len(text)
    if bits.bit_length() > w:
        raise ValueError(f"bus value does not fit {w} bits")
    return bits, w


def format_bus(bits: int, width: int) -> str:
    return format(bits, f"0{width}b") if width else ""

"""State machines embedded in long-term memory.

A machine is triggered when every one of its trigger cues equals the
current STM reading (zero included), then runs its steps uninterrupted
within one tick.
"""

from __future__ import annotations

from dataclasses import dataclass

from assocbrain import nanocode
from assocbrain.errors import NoRecall, SchemaError, WriteOnceViolation
from assocbrain.ltm import ACTION_CODES, OPERATOR_CODES, SearchCues, operator_code
from assocbrain.memory import StmWord, dominate

PROBLEM_FIELDS = ("A", "X", "OP", "B", "EQ", "Y")
ARITH_FIELDS = ("op1", "op2", "aop", "result")
DIVIDE_FIELDS = ("dv1", "dv2", "dvr")


@dataclass(frozen=True)
class RunNano:
    program: nanocode.NanoProgram

    def describe(self):
        return {"type": "nano", "program": self.program.name, "ops": len(self.program)}


@dataclass(frozen=True)
class ArithLookup:
    op1: str
    op2: str
    operator: str
    result: str

    def describe(self):
        return {"type": "arith", "lookup": f"{self.op1}{_sym(self.operator)}{self.op2}->{self.result}"}


@dataclass(frozen=True)
class Halt:
    def describe(self):
        return {"type": "halt"}


def _sym(op):
    from assocbrain.ltm import SYMBOL_OF, OPERATOR_NAMES

    return SYMBOL_OF[OPERATOR_NAMES[operator_code(op)]]


@dataclass(frozen=True)
class StateMachine:
    id: str
    trigger: SearchCues
    steps: tuple

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        if not self.steps:
            raise ValueError(f"machine {self.id}: needs at least one step")
        if not len(self.trigger):
            raise ValueError(f"machine {self.id}: trigger must not be empty")

    def validate(self, schema):
        for f, _ in self.trigger:
            schema.index(f)
        for s in self.steps:
            if isinstance(s, RunNano):
                nanocode.check(s.program, schema.bus_width)
            elif isinstance(s, ArithLookup):
                for f in (s.op1, s.op2, s.result):
                    schema.index(f)
                operator_code(s.operator)

    def nanocode(self) -> nanocode.NanoProgram:
        """All nanocode of the machine, concatenated in step order."""
        prog = nanocode.NanoProgram((), self.id)
        for s in self.steps:
            if isinstance(s, RunNano):
                prog = prog + s.program
        return prog


@dataclass
class StepRecord:
    index: int
    step: object
    stm: StmWord
    diagnostic: str = ""


class MachineAbort(NoRecall):
    """A machine step could not recall what it needed."""

    def __init__(self, machine, step_index, stm, trace, reason):
        self.machine = machine
        self.step_index = step_index
        self.stm = stm
        self.trace = trace
        super().__init__(f"{machine.id} aborted at step {step_index}: {reason}")


def install_machine(ltm, machine: StateMachine) -> str:
    if machine.id in ltm.machines:
        raise WriteOnceViolation(f"machine {machine.id!r} is already installed")
    machine.validate(ltm.schema)
    ltm.machines[machine.id] = machine
    return machine.id


def trigger(ltm, stm: StmWord) -> StateMachine | None:
    for machine in ltm.machines.values():
        if all(stm.read(f) == v for f, v in machine.trigger):
            return machine
    return None


def execute(machine: StateMachine, stm: StmWord, ltm, ttl: int | None = None):
    """Run every step; returns ``(final stm, [StepRecord, ...])``.

    Raises MachineAbort when an arithmetic fact is not in memory.
    """
    ttl = stm.ttl_max if ttl is None else ttl
    width = stm.schema.bus_width
    trace = []
    for k, s in enumerate(machine.steps, start=1):
        note = ""
        if isinstance(s, RunNano):
            nanocode.check(s.program, width)
            bus = stm.bus
            bad = nanocode.precondition_violations(bus, s.program)
            if bad:
                note = f"dst_not_zero={bad:#x}"
            stm = stm.with_bus(nanocode.run(bus, s.program, width), ttl)
        elif isinstance(s, ArithLookup):
            try:
                value = ltm.lookup_arithmetic(stm.read(s.op1), stm.read(s.op2), s.operator)
            except NoRecall as exc:
                raise MachineAbort(machine, k, stm, trace, str(exc)) from exc
            stm = dominate(stm, {s.result: value}, ttl)
        elif isinstance(s, Halt):
            trace.append(StepRecord(k, s, stm))
            break
        trace.append(StepRecord(k, s, stm, note))
    return stm, trace


def _require(schema, names):
    missing = [n for n in names if n not in schema]
    if missing:
        raise SchemaError(f"schema lacks required fields {missing}")


def method_alpha_trigger() -> SearchCues:
    return SearchCues([("X", 1), ("OP", OPERATOR_CODES["plus"]), ("EQ", 1),
                       ("op1", 0), ("op2", 0), ("result", 0)])


def solve_ax_trigger() -> SearchCues:
    return SearchCues([("X", 1), ("B", 0), ("EQ", 1), ("dv1", 0), ("dv2", 0), ("dvr", 0)])


def builtin_method_alpha(schema, trigger_cues: SearchCues | None = None) -> StateMachine:
    """Reduce ``Ax + B = Y`` to ``Ax = Y - B`` with 8 + 8 + 4 nanocode ops."""
    _require(schema, PROBLEM_FIELDS + ARITH_FIELDS)
    steps = (
        RunNano(nanocode.emit_move(schema, "Y", "op1", "move_Y_op1")),
        RunNano(nanocode.emit_move(schema, "B", "op2", "move_B_op2")),
        ArithLookup("op1", "op2", "minus", "result"),
        RunNano(nanocode.emit_copy(schema, "result", "Y", "copy_result_Y")),
        Halt(),
    )
    return StateMachine("method_alpha", trigger_cues or method_alpha_trigger(), steps)


def builtin_solve_ax(schema, trigger_cues: SearchCues | None = None) -> StateMachine:
    """Solve ``Ax = Y`` by associative division; leaves a unit coefficient."""
    _require(schema, PROBLEM_FIELDS + ARITH_FIELDS + DIVIDE_FIELDS)
    steps = (
        RunNano(nanocode.emit_move(schema, "Y", "dv1", "move_Y_dv1")),
        RunNano(nanocode.emit_move(schema, "A", "dv2", "move_A_dv2")),
        ArithLookup("dv1", "dv2", "divide", "dvr"),
        RunNano(nanocode.emit_copy(schema, "dvr", "Y", "copy_dvr_Y")),
        RunNano(nanocode.emit_set_bits([schema.bit("A", 0)], "unit_A")),
        Halt(),
    )
    return StateMachine("solve_2x", trigger_cues or solve_ax_trigger(), steps)


def interchange_left_right(stm: StmWord, schema=None, ttl: int | None = None) -> StmWord:
    """Swap action bits 0 and 1: Left <-> Right, Straight unchanged."""
    schema = schema or stm.schema
    prog = nanocode.emit_swap_bits(schema.bit("action", 0), schema.bit("action", 1),
                                   "interchange")
    ttl = stm.ttl_of("action") if ttl is None else ttl
    return stm.with_bus(nanocode.run(stm.bus, prog, schema.bus_width), ttl)


def render_problem(stm: StmWord) -> str:
    """Problem area as text; a zero operand drops together with its operator."""
    from assocbrain.ltm import OPERATOR_NAMES, SYMBOL_OF

    a, x, op, b, eq, y = (stm.read(f) for f in PROBLEM_FIELDS)
    if x:
        lhs = ("" if a == 1 else str(a)) + "x"
    else:
        lhs = str(a) if a else ""
    if b and op in OPERATOR_NAMES:
        lhs += f" {SYMBOL_OF[OPERATOR_NAMES[op]]} {b}"
    return f"{lhs or '0'} = {y}" if eq else lhs


def action_name(code: int) -> str:
    return {v: k for k, v in ACTION_CODES.items()}.get(code, str(code))

"""Scenario file loader.

Grammar, one section per bracketed header::

    [schema]            field <name> kind=<rational|irrational>
    [config]            <key>=<value>
    [ltm]               <field>=<int> ... [action=<id>] [rehearsals=<n>]
    [arith]             <a> <op> <b> = <c>
    [nanocode <name>]   FM/TO line pairs
    [machine <id>]      trigger: <field>=<int> ...   then nano/arith/halt lines
    [sensory]           tick=<n> <field>=<int> ...

Integers are decimal. ``#`` starts a comment. Values may also be written as
action names (Right, Left, Straight) or operator names (plus, minus, ...).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from assocbrain import nanocode
from assocbrain.errors import AssemblyError, AssocBrainError, ScenarioError
from assocbrain.ltm import (ACTION_CODES, OPERATOR_CODES, OPERATOR_SYMBOLS, LongTermMemory,
                            LtmWord, SearchCues, operator_code)
from assocbrain.machines import ArithLookup, Halt, RunNano, StateMachine, install_machine
from assocbrain.memory import AttributeSchema, Config, FieldDescriptor, StmWord

_HEADER = re.compile(r"^\[(\w+)(?:\s+(\w+))?\]\s*(.*)$")
_CONFIG_ALIASES = {"R": "rehearsal_threshold", "L": "repression_limit",
                   "policy": "multi_match_policy", "ttl": "ttl_default"}
_BOOL = {"true": True, "on": True, "yes": True, "1": True,
         "false": False, "off": False, "no": False, "0": False}


def parse_value(token: str, lineno: int | None = None) -> int:
    if token.isdigit():
        return int(token)
    if token in ACTION_CODES:
        return ACTION_CODES[token]
    name = OPERATOR_SYMBOLS.get(token, token)
    if name in OPERATOR_CODES:
        return OPERATOR_CODES[name]
    raise ScenarioError(f"bad value {token!r}", lineno)


def _pairs(tokens, lineno):
    out = []
    for tok in tokens:
        key, eq, val = tok.partition("=")
        if not eq or not key:
            raise ScenarioError(f"expected key=value, got {tok!r}", lineno)
        out.append((key, val))
    return out


@dataclass
class ScenarioSource:
    """Parsed but unbuilt scenario sections."""

    fields: list = field(default_factory=list)
    config: dict = field(default_factory=dict)
    ltm: list = field(default_factory=list)
    arith: list = field(default_factory=list)
    nanocode: dict = field(default_factory=dict)
    machines: list = field(default_factory=list)
    sensory: list = field(default_factory=list)


def parse(text: str) -> ScenarioSource:
    src = ScenarioSource()
    section, arg = None, None
    nano_lines: list[tuple[int, str]] = []
    machine = None

    def flush_nano():
        if section == "nanocode":
            body = "\n".join(l for _, l in nano_lines)
            first = nano_lines[0][0] if nano_lines else None
            try:
                prog = nanocode.assemble(body, arg)
            except AssemblyError as exc:
                line = (nano_lines[0][0] + exc.line - 1) if nano_lines and exc.line else first
                raise ScenarioError(str(exc).split(": ", 1)[-1], line) from None
            src.nanocode[arg] = (prog, header_line)

    header_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            if section == "nanocode":
                nano_lines.append((lineno, ""))
            continue
        m = _HEADER.match(line)
        if m:
            flush_nano()
            section, arg, rest = m.group(1), m.group(2), m.group(3).strip()
            header_line = lineno
            nano_lines = []
            if section not in ("schema", "config", "ltm", "arith", "nanocode", "machine",
                               "sensory"):
                raise ScenarioError(f"unknown section [{section}]", lineno)
            if section in ("nanocode", "machine") and not arg:
                raise ScenarioError(f"[{section}] needs a name", lineno)
            if section == "nanocode" and arg in src.nanocode:
                raise ScenarioError(f"duplicate nanocode block {arg!r}", lineno)
            if section == "machine":
                machine = {"id": arg, "trigger": None, "steps": [], "line": lineno}
                src.machines.append(machine)
                if rest:
                    _machine_line(machine, rest, lineno)
            elif rest:
                raise ScenarioError(f"unexpected text after [{section}]", lineno)
            continue
        if section is None:
            raise ScenarioError("content before any section header", lineno)
        if section == "schema":
            toks = line.split()
            if toks[0] != "field" or len(toks) < 2:
                raise ScenarioError("expected 'field <name> kind=<kind>'", lineno)
            kind = "rational"
            for key, val in _pairs(toks[2:], lineno):
                if key != "kind":
                    raise ScenarioError(f"unknown field option {key!r}", lineno)
                kind = val
            src.fields.append((toks[1], kind, lineno))
        elif section == "config":
            for key, val in _pairs(line.split(), lineno):
                src.config[_CONFIG_ALIASES.get(key, key)] = (val, lineno)
        elif section == "ltm":
            src.ltm.append((_pairs(line.split(), lineno), lineno))
        elif section == "arith":
            toks = line.split()
            if len(toks) != 5 or toks[3] != "=":
                raise ScenarioError("expected '<a> <op> <b> = <c>'", lineno)
            try:
                a, b, c = (int(toks[i]) for i in (0, 2, 4))
                op = operator_code(toks[1])
            except ValueError as exc:
                raise ScenarioError(str(exc), lineno) from None
            src.arith.append((a, op, b, c, lineno))
        elif section == "nanocode":
            nano_lines.append((lineno, line))
        elif section == "machine":
            _machine_line(machine, line, lineno)
        elif section == "sensory":
            pairs = _pairs(line.split(), lineno)
            if not pairs or pairs[0][0] != "tick":
                raise ScenarioError("sensory line must start with tick=<n>", lineno)
            if not pairs[0][1].isdigit():
                raise ScenarioError(f"bad tick {pairs[0][1]!r}", lineno)
            src.sensory.append((int(pairs[0][1]), pairs[1:], lineno))
    flush_nano()
    return src


def _machine_line(machine, line, lineno):
    if line.startswith("trigger:"):
        if machine["trigger"] is not None:
            raise ScenarioError("machine has two trigger lines", lineno)
        machine["trigger"] = (_pairs(line[len("trigger:"):].split(), lineno), lineno)
        return
    toks = line.split()
    if toks[0] == "nano" and len(toks) == 2:
        machine["steps"].append(("nano", toks[1], lineno))
    elif toks[0] == "arith" and len(toks) == 6 and toks[4] == "->":
        machine["steps"].append(("arith", (toks[1], toks[2], toks[3], toks[5]), lineno))
    elif toks == ["halt"]:
        machine["steps"].append(("halt", None, lineno))
    else:
        raise ScenarioError(f"bad machine step {line!r}", lineno)


def _config(raw: dict) -> Config:
    kwargs = {}
    for key, (val, lineno) in raw.items():
        if key not in Config.__dataclass_fields__:
            raise ScenarioError(f"unknown config key {key!r}", lineno)
        ftype = Config.__dataclass_fields__[key].default
        if isinstance(ftype, bool):
            if val.lower() not in _BOOL:
                raise ScenarioError(f"{key} expects a boolean", lineno)
            kwargs[key] = _BOOL[val.lower()]
        elif key == "multi_match_policy":
            kwargs[key] = val
        else:
            if not val.isdigit():
                raise ScenarioError(f"{key} expects a non-negative integer", lineno)
            kwargs[key] = int(val)
    try:
        return Config(**kwargs)
    except ValueError as exc:
        raise ScenarioError(str(exc)) from None


def load_scenario(text: str, overrides: dict | None = None, backend: str | None = None):
    """Build a World from scenario text. ``overrides`` replaces config keys."""
    from assocbrain.world import World, landmark_warnings

    src = parse(text)
    if not src.fields:
        raise ScenarioError("scenario has no [schema] fields")
    try:
        schema = AttributeSchema(FieldDescriptor(n, k) for n, k, _ in src.fields)
    except AssocBrainError as exc:
        raise ScenarioError(str(exc), src.fields[0][2]) from None
    config = _config(src.config)
    if overrides:
        config = Config(**{**config.__dict__, **overrides})

    ltm = LongTermMemory(schema, config.rehearsal_threshold, backend=backend)
    notes = []
    for pairs, lineno in src.ltm:
        values, action, rehearsals = {}, None, config.rehearsal_threshold
        for key, val in pairs:
            if key == "rehearsals":
                if not val.isdigit():
                    raise ScenarioError("rehearsals expects an integer", lineno)
                rehearsals = int(val)
            elif key == "action" and not val.isdigit():
                if val not in ACTION_CODES:
                    raise ScenarioError(f"unknown action {val!r}", lineno)
                action = val
                if "action" in schema:
                    values["action"] = ACTION_CODES[val]
            else:
                if key not in schema:
                    raise ScenarioError(f"unknown field {key!r}", lineno)
                if key in values:
                    raise ScenarioError(f"field {key!r} given twice", lineno)
                values[key] = parse_value(val, lineno)
        try:
            idx = ltm.memorize(LtmWord(values, action=action), rehearsals)
        except AssocBrainError as exc:
            raise ScenarioError(str(exc), lineno) from None
        if idx is None:
            notes.append(f"line {lineno}: rehearsed {rehearsals} < R={config.rehearsal_threshold}, not memorized")
    for a, op, b, c, lineno in src.arith:
        try:
            ltm.memorize_fact(a, op, b, c)
        except AssocBrainError as exc:
            raise ScenarioError(str(exc), lineno) from None

    programs = {}
    for name, (prog, lineno) in src.nanocode.items():
        problems = nanocode.verify(prog, schema.bus_width)
        if problems:
            raise ScenarioError(f"nanocode {name}: " + "; ".join(problems), lineno)
        programs[name] = prog

    for m in src.machines:
        if m["trigger"] is None:
            raise ScenarioError(f"machine {m['id']} has no trigger", m["line"])
        tpairs, tline = m["trigger"]
        try:
            trig = SearchCues((k, parse_value(v, tline)) for k, v in tpairs)
        except ValueError as exc:
            raise ScenarioError(str(exc), tline) from None
        steps = []
        for kind, arg, lineno in m["steps"]:
            if kind == "nano":
                if arg not in programs:
                    raise ScenarioError(f"unknown nanocode block {arg!r}", lineno)
                steps.append(RunNano(programs[arg]))
            elif kind == "arith":
                op1, op, op2, res = arg
                try:
                    operator_code(op)
                except ValueError as exc:
                    raise ScenarioError(str(exc), lineno) from None
                steps.append(ArithLookup(op1, op2, OPERATOR_SYMBOLS.get(op, op), res))
            else:
                steps.append(Halt())
        try:
            install_machine(ltm, StateMachine(m["id"], trig, tuple(steps)))
        except (AssocBrainError, ValueError) as exc:
            raise ScenarioError(str(exc), m["line"]) from None

    sensory = []
    for tick, pairs, lineno in src.sensory:
        values = {}
        for key, val in pairs:
            if key not in schema:
                raise ScenarioError(f"unknown field {key!r}", lineno)
            values[key] = parse_value(val, lineno)
            if values[key] > 15:
                raise ScenarioError(f"value {values[key]} does not fit a 4-bit field", lineno)
        sensory.append((tick, values))
    sensory.sort(key=lambda item: item[0])

    world = World(schema=schema, stm=StmWord.empty(schema, config.ttl_max), ltm=ltm,
                  config=config, programs=programs, sensory_queue=sensory)
    world.warnings.extend(notes)
    world.warnings.extend(landmark_warnings(ltm))
    return world

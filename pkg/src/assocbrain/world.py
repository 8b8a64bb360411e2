"""The attention loop: sensory input, recall, cue editing, gating, machines, decay."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from assocbrain.cue_editor import edit_and_search
from assocbrain.importance import encode_importance, gate
from assocbrain.ltm import ACTION_NAMES, LongTermMemory, SearchCues
from assocbrain.machines import (PROBLEM_FIELDS, MachineAbort, execute, interchange_left_right,
                                 render_problem, trigger)
from assocbrain.memory import AttributeSchema, Config, StmWord, dominate, tick_decay

# Response fields hold what a recall tells us to do; they are never search cues.
RESPONSE_FIELDS = ("action",)

EVENT_KINDS = ("Sensory", "Search", "NoRecall", "MultMatch", "Recall", "Repressed",
               "EditPass", "MachineStep", "Interchange")


def _fmt(value) -> str:
    s = str(value)
    return f'"{s}"' if (" " in s or not s) else s


@dataclass(frozen=True)
class TraceEvent:
    tick: int
    kind: str
    payload: tuple[tuple[str, object], ...] = ()

    def __post_init__(self):
        if self.kind not in EVENT_KINDS:
            raise ValueError(f"unknown event kind {self.kind!r}")

    def get(self, key, default=None):
        return dict(self.payload).get(key, default)

    def render(self) -> str:
        parts = [f"tick={self.tick}", self.kind]
        parts += [f"{k}={_fmt(v)}" for k, v in self.payload]
        return " ".join(parts)

    def __str__(self):
        return self.render()


@dataclass
class World:
    schema: AttributeSchema
    stm: StmWord
    ltm: LongTermMemory
    config: Config
    programs: dict = field(default_factory=dict)
    sensory_queue: list = field(default_factory=list)
    tick: int = 0
    trace: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    @property
    def machines(self):
        return self.ltm.machines

    def has_problem_area(self) -> bool:
        return all(f in self.schema for f in PROBLEM_FIELDS)

    def describe(self) -> str:
        lines = [f"tick {self.tick}",
                 "schema " + " ".join(f"{d.name}:{d.kind[0]}" for d in self.schema.fields),
                 f"config {self.config}",
                 f"stm {self.stm.render()}"]
        if self.has_problem_area():
            lines.append(f"problem {render_problem(self.stm)}")
        lines.append(f"ltm {len(self.ltm)} words")
        for i, w in enumerate(self.ltm):
            lines.append(f"  [{i}] {w.render()}")
        lines.append(f"machines {' '.join(self.ltm.machines) or '-'}")
        for name, prog in self.programs.items():
            lines.append(f"  nanocode {name}: {len(prog)} ops")
        pending = [s for s in self.sensory_queue if s[0] >= self.tick]
        lines.append(f"sensory pending {len(pending)}")
        for w in self.warnings:
            lines.append(f"warning {w}")
        return "\n".join(lines)


def _emit(world, kind, sink, **payload):
    ev = TraceEvent(world.tick, kind, tuple(payload.items()))
    world.trace.append(ev)
    if sink is not None:
        sink(ev)
    return ev


def _matches(idxs) -> str:
    return ",".join(map(str, idxs)) or "-"


def attention_cycle(world: World, sink: Callable[[TraceEvent], None] | None = None) -> World:
    cfg, ltm = world.config, world.ltm
    ttl = cfg.ttl_default
    stm = world.stm

    # 1. sensory input due this tick
    sensed = set()
    for t, values in world.sensory_queue:
        if t == world.tick:
            stm = dominate(stm, values, ttl)
            sensed.update(values)
            _emit(world, "Sensory", sink, values=SearchCues(values).render())

    # 2-4. search, edit on a block, gate, dominate
    cues = SearchCues((f, v) for f, v in stm.live_values().items()
                      if f not in RESPONSE_FIELDS)
    if len(cues):
        outcome = ltm.search(cues)
        _emit(world, "Search", sink, cues=cues.render(), outcome=outcome.kind,
              matches=_matches(outcome.matches))
        used = cues
        if outcome.kind == "no_recall":
            _emit(world, "NoRecall", sink, cues=cues.render())
            delivered, etrace = edit_and_search(ltm, cues, cfg.multi_match_policy,
                                                cfg.pair_removal)
            for k, p in enumerate(etrace.passes[1:], start=1):
                _emit(world, "EditPass", sink, n=k, removed="+".join(p.removed),
                      outcome=p.outcome,
                      matches=_matches(p.matches))
            if etrace.resolved is not None:
                removed = set(etrace.resolved[0])
                used = SearchCues((f, v) for f, v in cues if f not in removed)
                last = etrace.passes[-1]
                if len(last.matches) > 1:
                    _emit(world, "MultMatch", sink, count=len(last.matches),
                          matches=_matches(last.matches),
                          **{"class": ltm.classify_multiple(last.matches)})
        else:
            if outcome.kind == "multiple":
                _emit(world, "MultMatch", sink, count=outcome.count,
                      matches=_matches(outcome.matches),
                      **{"class": ltm.classify_multiple(outcome.matches)})
            delivered = ltm.deliver(outcome, cfg.multi_match_policy, cues)

        for idx in delivered:
            word = ltm[idx]
            record = encode_importance(word, used, world.schema)
            if not gate(record, cfg.repression_limit, cfg.dream_mode):
                _emit(world, "Repressed", sink, word=idx, irrational=record.irrational_count,
                      limit=cfg.repression_limit)
                continue
            incoming = {f: v for f, v in word.values.items() if f not in sensed}
            stm = dominate(stm, incoming, ttl)
            extra = {"action": word.action} if word.action else {}
            _emit(world, "Recall", sink, word=idx, cues=used.render(), **extra)
            if cfg.interchange and "action" in world.schema and stm.read("action"):
                before = stm.read("action")
                stm = interchange_left_right(stm, world.schema)
                _emit(world, "Interchange", sink, **{"from": ACTION_NAMES.get(before, before),
                                                     "to": ACTION_NAMES.get(stm.read("action"),
                                                                            stm.read("action"))})

    # 5. embedded state machine
    machine = trigger(ltm, stm)
    if machine is not None:
        try:
            stm, steps = execute(machine, stm, ltm, ttl)
        except MachineAbort as abort:
            stm, steps = abort.stm, abort.trace
            _machine_events(world, machine, steps, sink)
            _emit(world, "NoRecall", sink, machine=machine.id, step=abort.step_index)
        else:
            _machine_events(world, machine, steps, sink)

    # 6. decay
    world.stm = tick_decay(stm)
    world.tick += 1
    return world


def _machine_events(world, machine, steps, sink):
    for rec in steps:
        payload = {"machine": machine.id, "step": rec.index}
        payload.update(rec.step.describe())
        if rec.diagnostic:
            k, _, v = rec.diagnostic.partition("=")
            payload[k] = v
        payload["stm"] = rec.stm.render()
        if world.has_problem_area():
            payload["problem"] = render_problem(rec.stm)
        _emit(world, "MachineStep", sink, **payload)


def run_simulation(world: World, n: int, sink=None):
    if n < 0:
        raise ValueError("tick count must be >= 0")
    for _ in range(n):
        attention_cycle(world, sink)
    return world, world.trace


def render_trace(trace) -> str:
    return "".join(ev.render() + "\n" for ev in trace)


def determinant(matrix) -> int:
    """Exact integer determinant (fraction-free Bareiss elimination)."""
    a = [list(map(int, row)) for row in matrix]
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("matrix must be square")
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def landmark_matrix(ltm: LongTermMemory):
    """Rows = action-tagged words; columns = non-action fields they use; absent = 0."""
    rows = [w for w in ltm if w.action]
    used = {f for w in rows for f in w.values if f != "action"}
    cols = [f for f in ltm.schema.names if f in used]
    return cols, [[w.values.get(f, 0) for f in cols] for w in rows]


def landmark_warnings(ltm: LongTermMemory) -> list[str]:
    cols, rows = landmark_matrix(ltm)
    if not rows:
        return []
    if len(rows) == len(cols):
        if determinant(rows) == 0:
            return [f"landmark matrix over {','.join(cols)} is singular; "
                    "intersections may not be uniquely marked"]
        return []
    seen = set()
    for row in rows:
        if tuple(row) in seen:
            return [f"landmark rows repeat {row}; intersections not uniquely marked"]
        seen.add(tuple(row))
    return []

"""Exit criteria. Each test prints one PASS/FAIL line (visible with ``-s`` or ``-v``)."""

import io
import random
import time
from contextlib import contextmanager
from importlib import resources
from pathlib import Path

import pytest

from assocbrain import (AttributeSchema, Config, FieldDescriptor, LongTermMemory, LtmWord,
                        NanoOp, NanoProgram, SearchCues, StmWord, World, WriteOnceViolation,
                        brainstorm, builtin_method_alpha, edit_and_search, engram,
                        interchange_left_right, load_scenario, render_problem, reverse,
                        run, run_simulation, step, verify, dominate, gate)
from assocbrain.cli import main
from assocbrain.importance import ImportanceRecord
from assocbrain.machines import RunNano
from assocbrain.nanocode import format_bus, parse_bus, run_many
from assocbrain.world import determinant, landmark_matrix, render_trace
from conftest import LANDMARK_MATRIX
from oracles import classify, cofactor_det, scan_matches

GOLDEN = Path(__file__).parent / "golden"


def bundled(name):
    return (resources.files("assocbrain") / "scenarios" / name).read_text()


@contextmanager
def criterion(capsys, label, budget_s=None):
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        if ok and budget_s is not None and elapsed >= budget_s:
            ok = False
        with capsys.disabled():
            print(f"\n[acceptance] {'PASS' if ok else 'FAIL'} {label} ({elapsed:.2f}s"
                  + (f" / budget {budget_s}s)" if budget_s else ")"))
    assert elapsed < (budget_s or float("inf")), f"{label} took {elapsed:.2f}s"


def test_c1_equation_pipeline(capsys):
    with criterion(capsys, "C1 equation pipeline", 1.0):
        world = load_scenario(bundled("equation.scn"))
        run_simulation(world, 1)
        alpha_steps = [e for e in world.trace if e.kind == "MachineStep"]
        assert {e.get("machine") for e in alpha_steps} == {"method_alpha"}
        assert render_problem(world.stm) == "2x = 6"
        run_simulation(world, 2)
        solve = [e for e in world.trace if e.get("machine") == "solve_2x"]
        assert solve and solve[-1].get("problem") == "x = 3"
        assert render_problem(world.stm) == "x = 3"

        alpha = builtin_method_alpha(world.schema)
        sizes = [len(s.program) for s in alpha.steps if isinstance(s, RunNano)]
        assert sizes == [8, 8, 4]
        code = alpha.nanocode()
        assert len(code) == 20
        assert len(code.text().splitlines()) == 40
        lines = [len(s.program.text().splitlines()) for s in alpha.steps
                 if isinstance(s, RunNano)]
        assert lines == [16, 16, 8]
        assert world.machines["method_alpha"].nanocode().ops == code.ops


def _random_program(rng, width):
    ops = []
    for _ in range(rng.randint(1, 64)):
        bits = rng.sample(range(width), rng.randint(1, 8))
        cut = rng.randint(0, len(bits) - 1)
        ops.append(NanoOp(bits[:cut], bits[cut:]))
    return NanoProgram(tuple(ops))


def test_c2_reversibility(capsys, backend):
    with criterion(capsys, f"C2 reversibility suite [{backend}]", 30.0):
        rng = random.Random(2024)
        width = 52
        for _ in range(1000):
            prog = _random_program(rng, width)
            assert verify(prog, width) == []
            s = rng.getrandbits(width)
            fwd = run(s, prog, width, backend=backend)
            assert run(fwd, reverse(prog), width, backend=backend) == s
            for op in prog.ops:
                t = rng.getrandbits(width)
                assert step(step(t, op), op) == t
        states = list(range(1 << 12))
        for _ in range(50):
            prog = _random_program(rng, 12)
            assert sorted(run_many(states, prog, 12, backend=backend)) == states
            for op in prog.ops[:4]:
                assert all(step(step(s, op), op) == s for s in states)


def test_c3_black_forest(capsys, forest_ltm):
    with criterion(capsys, f"C3 black-forest fixture [{forest_ltm._kernel.__name__}]", 1.0):
        ltm = forest_ltm
        out = ltm.search(SearchCues(dict(B=1, C=2, D=1, S=2)))
        assert (out.kind, out.matches) == ("single", (3,))
        assert ltm[3].action == "Left"

        out = ltm.search(SearchCues(dict(C=2, D=1, S=2)))
        assert (out.kind, set(out.matches)) == ("multiple", {2, 3})

        fishes = SearchCues([("B", 1), ("C", 2), ("D", 1), ("S", 2), ("F", 1)])
        assert ltm.search(fishes).kind == "no_recall"
        delivered, trace = edit_and_search(ltm, fishes)
        assert trace.resolved_at == 5 and trace.resolved[0] == ("F",)
        assert delivered == [3]

        stm = dominate(StmWord.empty(ltm.schema), ltm[3], 30)
        assert interchange_left_right(stm).read("action") == 1
        straight = dominate(StmWord.empty(ltm.schema), ltm[2], 30)
        assert interchange_left_right(straight).read("action") == 3

        cols, rows = landmark_matrix(ltm)
        assert rows == LANDMARK_MATRIX
        assert cofactor_det(rows) == -2
        assert determinant(rows) == -2


def test_c4_oracle_equivalence(capsys, backend):
    with criterion(capsys, f"C4 associative-memory oracle equivalence [{backend}]", 30.0):
        rng = random.Random(4)
        seen = set()
        for _ in range(1200):
            nfields = rng.randint(1, 16)
            schema = AttributeSchema([f"f{i}" for i in range(nfields)])
            ltm = LongTermMemory(schema, 1, backend=backend)
            vmax = rng.choice([1, 2, 3, 15])
            for _ in range(rng.randint(0, 64)):
                ltm.memorize(LtmWord({f: rng.randint(0, vmax) for f in schema.names
                                      if rng.random() < 0.7}), 1)
            cue_set = SearchCues((f, rng.randint(0, vmax))
                                 for f in rng.sample(schema.names, rng.randint(0, nfields)))
            expected = scan_matches(ltm.words, cue_set)
            out = ltm.search(cue_set)
            assert (out.kind, out.count, list(out.matches)) == (
                classify(expected), len(expected), expected)
            seen.add(out.kind)
            if len(cue_set):
                sets = brainstorm(ltm, cue_set)
                full = sets[0][1]
                assert all(full <= m for _, m in sets[1:])
        assert seen == {"no_recall", "single", "multiple"}


def test_c5_write_once_and_rehearsal(capsys, forest_schema):
    with criterion(capsys, "C5 write-once + rehearsal"):
        ltm = LongTermMemory(forest_schema, rehearsal_threshold=3)
        for r in range(3):
            assert ltm.memorize(engram("Right", B=1), r) is None
        assert len(ltm) == 0
        assert ltm.memorize(engram("Right", B=1), 3) == 0
        assert ltm.memorize(engram("Left", B=2), 7) == 1

        rng = random.Random(5)
        frozen = {}
        for _ in range(3000):
            op = rng.randrange(4)
            if op == 0:
                vals = {f: rng.randint(0, 15) for f in forest_schema.names if rng.random() < 0.5}
                idx = ltm.memorize(LtmWord(vals), rng.randint(0, 5))
                if idx is not None:
                    frozen[idx] = ltm.schema.pack(ltm[idx].values)
            elif op == 1:
                i = rng.randrange(len(ltm))
                with pytest.raises(WriteOnceViolation):
                    ltm.memorize(LtmWord({"B": 1}), 9, address=i)
                with pytest.raises(WriteOnceViolation):
                    ltm[i] = LtmWord()
            elif op == 2:
                w = ltm[rng.randrange(len(ltm))]
                with pytest.raises(WriteOnceViolation):
                    w.values["S"] = 1
                with pytest.raises(WriteOnceViolation):
                    w.values = {}
            else:
                ltm.search(SearchCues({"B": rng.randint(0, 3)}))
        for idx, packed in frozen.items():
            assert ltm.schema.pack(ltm[idx].values) == packed


def _haunted(dream):
    schema = AttributeSchema([FieldDescriptor("shape"), FieldDescriptor("dread", "irrational"),
                              FieldDescriptor("omen", "irrational"),
                              FieldDescriptor("curse", "irrational")])
    cfg = Config(repression_limit=2, dream_mode=dream)
    ltm = LongTermMemory(schema, cfg.rehearsal_threshold)
    ltm.memorize(LtmWord({"shape": 4, "dread": 1, "omen": 2, "curse": 3}), 3)
    return World(schema, StmWord.empty(schema), ltm, cfg, sensory_queue=[(0, {"shape": 4})])


def test_c6_repression(capsys):
    with criterion(capsys, "C6 repression"):
        world = _haunted(False)
        run_simulation(world, 5)
        kinds = [e.kind for e in world.trace]
        assert "Repressed" in kinds and "Recall" not in kinds
        assert world.stm.read("curse") == 0

        world = _haunted(True)
        run_simulation(world, 1)
        assert [e.kind for e in world.trace][-1] == "Recall"
        assert world.stm.read("curse") == 3

        for limit in range(6):
            allowed = [gate(ImportanceRecord(0, k, frozenset(range(k)), k), limit)
                       for k in range(8)]
            first_block = allowed.index(False) if False in allowed else len(allowed)
            assert all(allowed[:first_block]) and not any(allowed[first_block:])


def test_c7_determinism_and_golden(capsys, tmp_path):
    with criterion(capsys, "C7 determinism / golden traces"):
        for name, ticks in (("equation", 3), ("blackforest", 8)):
            runs = []
            for _ in range(2):
                world = load_scenario(bundled(f"{name}.scn"))
                run_simulation(world, ticks)
                runs.append(render_trace(world.trace))
            assert runs[0] == runs[1]
            assert runs[0] == (GOLDEN / f"{name}.trace").read_text()
            out = io.StringIO()
            assert main(["run", f"{name}.scn", "--ticks", str(ticks)], out) == 0
            assert out.getvalue() == runs[0]

        schema = load_scenario(bundled("equation.scn")).schema
        prog_text = builtin_method_alpha(schema).nanocode().text()
        path = tmp_path / "alpha.nano"
        path.write_text(prog_text)
        rng = random.Random(7)
        for _ in range(20):
            bus = format_bus(rng.getrandbits(schema.bus_width), schema.bus_width)
            out = io.StringIO()
            assert main(["nano-run", str(path), "--bus", bus], out) == 0
            bits, width = parse_bus(bus)
            lib = run(bits, builtin_method_alpha(schema).nanocode(), width)
            assert out.getvalue().strip() == format_bus(lib, width)

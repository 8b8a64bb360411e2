import random

import pytest
from hypothesis import given, settings, strategies as st

from assocbrain import (AttributeSchema, LongTermMemory, LtmWord, MultipleMatch, NoRecall,
                        SchemaError, SearchCues, SearchOutcome, WriteOnceViolation, engram)
from oracles import classify, scan_matches


def cues(**kw):
    return SearchCues(kw)


def test_memorize_rehearsal_gate(forest_schema):
    ltm = LongTermMemory(forest_schema, rehearsal_threshold=3)
    row1 = engram("Right", B=1, C=2, D=1, S=1)
    assert ltm.memorize(row1, rehearsals=2) is None
    assert len(ltm) == 0
    assert ltm.memorize(row1, rehearsals=3) == 0
    assert ltm[0].committed and ltm[0].values["action"] == 1
    with pytest.raises(WriteOnceViolation):
        ltm.memorize(engram("Left", B=1), rehearsals=3, address=0)
    assert ltm[0] == row1


def test_committed_word_is_immutable(forest_ltm):
    w = forest_ltm[0]
    with pytest.raises(WriteOnceViolation):
        w.action = "Left"
    with pytest.raises(WriteOnceViolation):
        w.values["B"] = 0
    with pytest.raises(WriteOnceViolation):
        del w.values["B"]
    with pytest.raises(WriteOnceViolation):
        forest_ltm[0] = engram("Left")
    with pytest.raises(WriteOnceViolation):
        del forest_ltm[0]


def test_memorize_rejects_foreign_fields(forest_schema):
    ltm = LongTermMemory(forest_schema)
    with pytest.raises(SchemaError):
        ltm.memorize(LtmWord({"Q": 1}), 5)
    with pytest.raises(SchemaError):
        ltm.memorize(LtmWord({"B": 16}), 5)


def test_search_black_forest(forest_ltm):
    assert forest_ltm.search(cues(B=1, C=2, D=1, S=2)) == SearchOutcome("single", (3,))
    assert forest_ltm.search(cues(C=2, D=1, S=2)) == SearchOutcome("multiple", (2, 3))
    assert forest_ltm.search(cues(B=1, C=2, D=1, S=2, F=1)) == SearchOutcome("no_recall")
    assert forest_ltm.search(SearchCues()) == SearchOutcome("multiple", (0, 1, 2, 3))


def test_search_outcome_invariants():
    with pytest.raises(ValueError):
        SearchOutcome("multiple", (1,))
    with pytest.raises(ValueError):
        SearchOutcome("multiple", (3, 2))


def test_cues_reject_duplicates():
    with pytest.raises(ValueError):
        SearchCues([("B", 1), ("B", 2)])


def test_deliver_policies(forest_ltm):
    multi = forest_ltm.search(cues(C=2, D=1, S=2))
    assert forest_ltm.deliver(multi, "first") == [2]
    assert forest_ltm.deliver(multi, "sequential") == [2, 3]
    # row 4 defines one more field (B) than row 3
    assert forest_ltm.deliver(multi, "importance_max", cues(C=2, D=1, S=2)) == [3]
    single = forest_ltm.search(cues(B=1, C=2, D=1, S=2))
    for policy in ("first", "sequential", "importance_max"):
        assert forest_ltm.deliver(single, policy) == [3]
    with pytest.raises(NoRecall):
        forest_ltm.deliver(SearchOutcome("no_recall"), "first")


def test_classify_multiple(forest_schema, forest_ltm):
    assert forest_ltm.classify_multiple([2, 3]) == "differentiating"
    ltm = LongTermMemory(forest_schema)
    for _ in range(2):
        ltm.memorize(engram("Left", C=2, D=1), 3)
    ltm.memorize(engram("Right", C=2, D=1), 3)
    assert ltm.classify_multiple([0, 1]) == "non_differentiating"
    assert ltm.classify_multiple([0, 1, 2]) == "differentiating"
    with pytest.raises(ValueError):
        ltm.classify_multiple([0])


def test_lookup_arithmetic(equation_schema):
    ltm = LongTermMemory(equation_schema)
    ltm.memorize_fact(11, "-", 5, 6)
    ltm.memorize_fact(6, "divide", 2, 3)
    assert ltm.lookup_arithmetic(11, 5, "minus") == 6
    assert ltm.lookup_arithmetic(6, 2, "/") == 3
    with pytest.raises(NoRecall):
        ltm.lookup_arithmetic(9, 7, "minus")
    ltm.memorize_fact(11, "-", 5, 7)
    with pytest.raises(MultipleMatch):
        ltm.lookup_arithmetic(11, 5, "minus")


def random_instance(rng, backend=None):
    nfields = rng.randint(1, 16)
    schema = AttributeSchema([f"f{i}" for i in range(nfields)])
    ltm = LongTermMemory(schema, rehearsal_threshold=1, backend=backend)
    # small value range so that matches, misses and multi-matches all occur
    vmax = rng.choice([1, 2, 3, 15])
    for _ in range(rng.randint(0, 64)):
        defined = [f for f in schema.names if rng.random() < 0.7]
        ltm.memorize(LtmWord({f: rng.randint(0, vmax) for f in defined}), 1)
    chosen = rng.sample(schema.names, rng.randint(0, nfields))
    cue_set = SearchCues((f, rng.randint(0, vmax)) for f in chosen)
    return ltm, cue_set


def test_search_matches_linear_scan_oracle(backend):
    rng = random.Random(1234)
    kinds = set()
    for _ in range(1500):
        ltm, cue_set = random_instance(rng, backend)
        expected = scan_matches(ltm.words, cue_set)
        outcome = ltm.search(cue_set)
        assert outcome.kind == classify(expected)
        assert outcome.count == len(expected)
        assert list(outcome.matches) == expected
        kinds.add(outcome.kind)
    assert kinds == {"no_recall", "single", "multiple"}


@settings(max_examples=200)
@given(st.integers(0, 2**32))
def test_cue_removal_is_monotone(seed):
    ltm, cue_set = random_instance(random.Random(seed))
    full = set(ltm.match_indices(cue_set))
    for i in range(len(cue_set)):
        assert full <= set(ltm.match_indices(cue_set.without(i)))


@settings(max_examples=200)
@given(st.integers(0, 2**32))
def test_first_is_head_of_sequential(seed):
    ltm, cue_set = random_instance(random.Random(seed))
    outcome = ltm.search(cue_set)
    if outcome.recalled:
        assert ltm.deliver(outcome, "first") == ltm.deliver(outcome, "sequential")[:1]


def test_write_once_under_random_operations(forest_schema):
    rng = random.Random(7)
    ltm = LongTermMemory(forest_schema, rehearsal_threshold=2)
    snapshots = {}
    for _ in range(2000):
        op = rng.randrange(5)
        if op == 0:
            vals = {f: rng.randint(0, 15) for f in forest_schema.names if rng.random() < 0.5}
            idx = ltm.memorize(LtmWord(vals), rng.randint(0, 4))
            if idx is not None:
                snapshots[idx] = (dict(ltm[idx].values), ltm[idx].action)
        elif op == 1 and len(ltm):
            with pytest.raises(WriteOnceViolation):
                ltm.memorize(LtmWord({"B": 1}), 9, address=rng.randrange(len(ltm)))
        elif op == 2 and len(ltm):
            w = ltm[rng.randrange(len(ltm))]
            with pytest.raises(WriteOnceViolation):
                w.values["C"] = rng.randint(0, 15)
            with pytest.raises(WriteOnceViolation):
                w.action = "Left"
        elif op == 3:
            ltm.search(SearchCues({"B": rng.randint(0, 3)}))
        elif op == 4 and len(ltm):
            with pytest.raises(WriteOnceViolation):
                ltm[rng.randrange(len(ltm))] = LtmWord()
    assert snapshots
    for idx, (vals, action) in snapshots.items():
        assert dict(ltm[idx].values) == vals and ltm[idx].action == action

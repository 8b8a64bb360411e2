import pytest

from assocbrain import AttributeSchema, FieldDescriptor, LongTermMemory, engram
from assocbrain.kernels import available_backends

FOREST_ROWS = [
    # B, C, D, S, action; a zero count is left undefined
    ({"B": 1, "C": 2, "D": 1, "S": 1}, "Right"),
    ({"C": 2, "D": 2, "S": 2}, "Left"),
    ({"C": 2, "D": 1, "S": 2}, "Straight"),
    ({"B": 1, "C": 2, "D": 1, "S": 2}, "Left"),
]
LANDMARK_MATRIX = [[1, 2, 1, 1], [0, 2, 2, 2], [0, 2, 1, 2], [1, 2, 1, 2]]

EQUATION_FIELDS = "A X OP B EQ Y op1 op2 aop result dv1 dv2 dvr".split()


@pytest.fixture
def forest_schema():
    return AttributeSchema(["B", "C", "D", "S", "F", "action"])


@pytest.fixture(params=available_backends())
def backend(request):
    return request.param


@pytest.fixture
def forest_ltm(forest_schema, backend):
    ltm = LongTermMemory(forest_schema, rehearsal_threshold=3, backend=backend)
    for values, action in FOREST_ROWS:
        assert ltm.memorize(engram(action, **values), rehearsals=3) is not None
    return ltm


@pytest.fixture
def equation_schema():
    return AttributeSchema(EQUATION_FIELDS)


@pytest.fixture
def irrational_schema():
    return AttributeSchema([
        FieldDescriptor("shape"),
        FieldDescriptor("color"),
        FieldDescriptor("dread", "irrational"),
        FieldDescriptor("omen", "irrational"),
        FieldDescriptor("curse", "irrational"),
    ])

"""Deterministic simulator of an associative-processor brain.

Short-term memory is a fixed-layout register of 4-bit attributes that decay
tick by tick; long-term memory is a write-once associative store searched by
cues; embedded state machines rewrite STM with reversible FM/TO nanocode.
"""

from assocbrain.cue_editor import EditTrace, brainstorm, edit_and_search
from assocbrain.errors import (AssemblyError, AssocBrainError, MultipleMatch, NoRecall,
                               ScenarioError, SchemaError, VerificationError,
                               WriteOnceViolation)
from assocbrain.importance import (ImportanceRecord, encode_importance, gate,
                                   select_most_important)
from assocbrain.kernels import BACKEND
from assocbrain.ltm import LongTermMemory, LtmWord, SearchCues, SearchOutcome, engram
from assocbrain.machines import (ArithLookup, Halt, RunNano, StateMachine, builtin_method_alpha,
                                 builtin_solve_ax, execute, install_machine,
                                 interchange_left_right, render_problem, trigger)
from assocbrain.memory import (AttributeSchema, Config, FieldDescriptor, StmWord, decode_value,
                               dominate, encode_value, tick_decay, write_field)
from assocbrain.nanocode import (NanoOp, NanoProgram, assemble, emit_copy, emit_move,
                                 emit_swap_bits, reverse, run, step, verify)
from assocbrain.scenario import load_scenario
from assocbrain.world import TraceEvent, World, attention_cycle, run_simulation

__version__ = "0.1.0"

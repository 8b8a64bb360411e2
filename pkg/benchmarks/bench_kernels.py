"""Compare the compiled and pure-Python kernels.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import random
import timeit

from assocbrain import AttributeSchema, LongTermMemory, LtmWord, NanoOp, NanoProgram, SearchCues
from assocbrain.kernels import available_backends
from assocbrain.nanocode import run, run_many


def make_program(rng, width, n_ops):
    ops = []
    for _ in range(n_ops):
        bits = rng.sample(range(width), 4)
        ops.append(NanoOp(bits[:2], bits[2:]))
    return NanoProgram(tuple(ops))


def bench(repeat):
    rng = random.Random(0)
    width = 52
    prog = make_program(rng, width, 64)
    states = [rng.getrandbits(width) for _ in range(4096)]

    schema = AttributeSchema([f"f{i}" for i in range(16)])
    memories = {}
    for name in available_backends():
        ltm = LongTermMemory(schema, 1, backend=name)
        r = random.Random(1)
        for _ in range(5000):
            ltm.memorize(LtmWord({f: r.randint(0, 3) for f in schema.names if r.random() < 0.8}), 1)
        memories[name] = ltm
    cues = SearchCues({"f0": 1, "f3": 2, "f7": 0})

    cases = {
        "run 64 ops x 1 state": lambda b: run(states[0], prog, width, backend=b),
        "run_many 64 ops x 4096 states": lambda b: run_many(states, prog, width, backend=b),
        "search 5000 words": lambda b: memories[b].search(cues),
    }
    print(f"{'case':34s}" + "".join(f"{b:>14s}" for b in available_backends()) + "   speedup")
    for label, fn in cases.items():
        times = {}
        for b in available_backends():
            n = 200 if "x 1 state" in label else 5
            times[b] = min(timeit.repeat(lambda: fn(b), number=n, repeat=repeat)) / n
        row = f"{label:34s}" + "".join(f"{times[b] * 1e6:12.1f}us" for b in times)
        if "cython" in times:
            row += f"   {times['python'] / times['cython']:6.1f}x"
        print(row)


if __name__ == "__main__":
    p = argparse.ArgumentParser()
    p.add_argument("--repeat", type=int, default=5)
    bench(p.parse_args().repeat)

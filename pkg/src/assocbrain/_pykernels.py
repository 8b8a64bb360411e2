"""Pure-Python kernels. Buses are Python ints of any width."""


def run_masks(bits, fm, to):
    for cond, target in zip(fm, to):
        if bits & cond == cond:
            bits ^= target
    return bits


def run_masks_reverse(bits, fm, to):
    for i in range(len(fm) - 1, -1, -1):
        cond = fm[i]
        if bits & cond == cond:
            bits ^= to[i]
    return bits


def run_masks_many(states, fm, to):
    pairs = list(zip(fm, to))
    out = []
    for bits in states:
        for cond, target in pairs:
            if bits & cond == cond:
                bits ^= target
        out.append(bits)
    return out


def match_indices(defined, values, cue_mask, cue_values):
    return [
        i
        for i, (dmask, vals) in enumerate(zip(defined, values))
        if dmask & cue_mask == cue_mask and vals & cue_mask == cue_values
    ]

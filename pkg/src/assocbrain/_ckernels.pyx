# cython: language_level=3
"""Compiled kernels for buses up to 64 bits wide.

Masks arrive as ``array('Q')`` (or any buffer of uint64). Callers route
wider buses to the pure-Python module.
"""

ctypedef unsigned long long u64


cdef inline u64 _run(u64 bits, const u64[::1] fm, const u64[::1] to) noexcept nogil:
    cdef Py_ssize_t i, n = fm.shape[0]
    cdef u64 cond
    for i in range(n):
        cond = fm[i]
        if bits & cond == cond:
            bits ^= to[i]
    return bits


def run_masks(u64 bits, const u64[::1] fm, const u64[::1] to):
    return _run(bits, fm, to)


def run_masks_reverse(u64 bits, const u64[::1] fm, const u64[::1] to):
    cdef Py_ssize_t i
    cdef u64 cond
    with nogil:
        for i in range(fm.shape[0] - 1, -1, -1):
            cond = fm[i]
            if bits & cond == cond:
                bits ^= to[i]
    return bits


def run_masks_many(const u64[::1] states, const u64[::1] fm, const u64[::1] to):
    cdef Py_ssize_t k, n = states.shape[0]
    out = bytearray(8 * n)
    cdef u64[::1] res = memoryview(out).cast("Q")
    with nogil:
        for k in range(n):
            res[k] = _run(states[k], fm, to)
    return list(res)


def match_indices(const u64[::1] defined, const u64[::1] values,
                  u64 cue_mask, u64 cue_values):
    cdef Py_ssize_t i, n = defined.shape[0]
    hits = []
    for i in range(n):
        if defined[i] & cue_mask == cue_mask and values[i] & cue_mask == cue_values:
            hits.append(i)
    return hits

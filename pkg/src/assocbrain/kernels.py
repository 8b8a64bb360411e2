"""Backend selection for the bus kernels.

The compiled module is used when it imports and the bus fits in 64 bits.
Set ``ASSOCBRAIN_PURE_PYTHON=1`` to force the fallback.
"""

import os
from array import array

from assocbrain import _pykernels

MAX_NATIVE_WIDTH = 64

_native = None
if not os.environ.get("ASSOCBRAIN_PURE_PYTHON"):
    try:
        from assocbrain import _ckernels as _native
    except ImportError:
        _native = None

BACKEND = "cython" if _native is not None else "python"


def available_backends():
    return ["python"] + (["cython"] if _native is not None else [])


def get_backend(width, name=None):
    """Return the kernel module for a bus of ``width`` bits."""
    if name == "python":
        return _pykernels
    if name == "cython":
        if _native is None:
            raise RuntimeError("compiled kernels are not built")
        if width > MAX_NATIVE_WIDTH:
            raise ValueError(f"compiled kernels support at most {MAX_NATIVE_WIDTH} bits")
        return _native
    if name is not None:
        raise ValueError(f"unknown backend {name!r}")
    if _native is not None and width <= MAX_NATIVE_WIDTH:
        return _native
    return _pykernels


def pack(masks, width):
    """Pack masks for the backend chosen for ``width``."""
    if width <= MAX_NATIVE_WIDTH:
        return array("Q", masks)
    return list(masks)

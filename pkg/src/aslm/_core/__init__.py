"""Backend selection for the compute kernels.

The compiled module is preferred when it imported cleanly; set
ASLM_BACKEND=python or ASLM_BACKEND=native to force one side. Both
expose the same functions with the same numerical contract.
"""

import os

from aslm._core._tree import LEAF_SIZE, KdTree, build  # noqa: F401

_requested = os.environ.get("ASLM_BACKEND", "").strip().lower()

if _requested in ("python", "fallback"):
    from aslm._core import _fallback as impl

    BACKEND = "python"
elif _requested in ("native", "compiled"):
    from aslm._core import _native as impl

    BACKEND = "native"
elif _requested:
    raise ImportError(f"unknown ASLM_BACKEND value: {_requested!r}")
else:
    try:
        from aslm._core import _native as impl

        BACKEND = "native"
    except ImportError:
        from aslm._core import _fallback as impl

        BACKEND = "python"


def backend_name() -> str:
    """Name of the active compute backend: 'native' or 'python'."""
    return BACKEND

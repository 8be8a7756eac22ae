"""Select the rewriting kernel at import time.

The compiled extension is used when it was built; setting QCURV_PURE_PYTHON=1
forces the pure-Python implementation.
"""

import os

from . import _kernel_py
from ._kernel_py import ResourceLimitError

IMPLEMENTATION = "python"
Rewriter = _kernel_py.Rewriter

if os.environ.get("QCURV_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernel_c
    except ImportError:
        _kernel_c = None
    if _kernel_c is not None:
        Rewriter = _kernel_c.Rewriter
        IMPLEMENTATION = "compiled"


def available_implementations():
    out = {"python": _kernel_py.Rewriter}
    try:
        from . import _kernel_c as mod
        out["compiled"] = mod.Rewriter
    except ImportError:
        pass
    return out


__all__ = ["Rewriter", "ResourceLimitError", "IMPLEMENTATION", "available_implementations"]

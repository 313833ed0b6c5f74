"""Hot O(N^2) kernels: Caputo weight assembly and Hessenberg elimination.

The compiled extension is used when it imports; otherwise the numpy
implementation is. Setting ``FRACLAYER_KERNELS=python`` forces the fallback.
"""

from __future__ import annotations

import os

from . import _pykernels
from ._pykernels import SingularPivotError

BACKEND = "python"
caputo_kernel = _pykernels.caputo_kernel
hessenberg_solve = _pykernels.hessenberg_solve

if os.environ.get("FRACLAYER_KERNELS", "").lower() != "python":
    try:
        from . import _ckernels
    except ImportError:
        _ckernels = None
    else:
        BACKEND = "cython"
        caputo_kernel = _ckernels.caputo_kernel
        hessenberg_solve = _ckernels.hessenberg_solve


def available_backends() -> dict:
    """Map of backend name to module, for benchmarks and cross-checks."""
    found = {"python": _pykernels}
    try:
        from . import _ckernels as compiled
    except ImportError:
        return found
    found["cython"] = compiled
    return found


__all__ = ["BACKEND", "SingularPivotError", "available_backends", "caputo_kernel", "hessenberg_solve"]

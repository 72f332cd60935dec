"""Select the kernel implementation at import time.

The compiled ``_kernels`` extension is preferred. Setting ``QRLAB_PURE_PYTHON``
forces the fallback; both produce identical results, so the choice only
affects speed.
"""
from __future__ import annotations

import os

if os.environ.get("QRLAB_PURE_PYTHON"):
    from . import _purepy as kernels

    BACKEND = "python"
else:
    try:
        from . import _kernels as kernels

        BACKEND = "cython"
    except ImportError:
        from . import _purepy as kernels

        BACKEND = "python"

__all__ = ["kernels", "BACKEND"]

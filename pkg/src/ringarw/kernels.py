"""Backend selection for the hot loops.

Default is the numba-compiled path; set ARW_NO_NUMBA=1 (or run without
numba installed) to use the pure numpy/python fallback.  Both backends are
draw-for-draw identical; see benchmarks/compare_backends.py for the speed
difference.
"""

from __future__ import annotations

import os

_want_numba = os.environ.get("ARW_NO_NUMBA", "0") != "1"

if _want_numba:
    try:
        from ._kernels_jit import excursion_minima, stabilize_ring

        BACKEND = "numba"
    except ImportError:
        from ._kernels_py import excursion_minima, stabilize_ring

        BACKEND = "python"
else:
    from ._kernels_py import excursion_minima, stabilize_ring

    BACKEND = "python"

__all__ = ["stabilize_ring", "excursion_minima", "BACKEND"]

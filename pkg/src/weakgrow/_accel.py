"""Kernel backend selection.

The numba backend is used by default; set WEAKGROW_NO_NUMBA=1 to force the
pure-numpy path (also used automatically when numba is not importable).
Both backends produce bit-identical results; benchmarks/bench_kernels.py
compares their speed.
"""

import os

_disabled = os.environ.get("WEAKGROW_NO_NUMBA", "").lower() in ("1", "true", "yes")

if not _disabled:
    try:
        from . import _kernels_numba as _impl

        BACKEND = "numba"
    except ImportError:
        from . import _kernels_numpy as _impl

        BACKEND = "numpy"
else:
    from . import _kernels_numpy as _impl

    BACKEND = "numpy"

mean_smooth_core = _impl.mean_smooth_core
dilate_core = _impl.dilate_core
erode_core = _impl.erode_core
grow_core = _impl.grow_core

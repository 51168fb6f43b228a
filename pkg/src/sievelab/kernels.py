"""Kernel backend selection.

Prefers the compiled extension (sievelab._kernels, built from Cython) and
falls back to the numpy implementation in sievelab._kernels_py.  Both
backends are bit-for-bit interchangeable; set SIEVELAB_PURE_PYTHON=1 to
force the fallback (used by the benchmark and the equivalence tests).
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("SIEVELAB_PURE_PYTHON"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

mc_sift_counts = _impl.mc_sift_counts
mc_trace_counts = _impl.mc_trace_counts
window_count_hist = _impl.window_count_hist
rough_min_window = _impl.rough_min_window

"""Selects the compiled kernels when built, else the numpy fallback.

Set ``METRICDISTORTION_PURE=1`` to force the fallback.
"""

import os

from . import _kernels_py

if os.environ.get("METRICDISTORTION_PURE", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND = "compiled" if _impl is not _kernels_py else "python"

OPTIMAL = _kernels_py.OPTIMAL
UNBOUNDED = _kernels_py.UNBOUNDED
ITERATION_LIMIT = _kernels_py.ITERATION_LIMIT

simplex_iterate = _impl.simplex_iterate
floyd_warshall = _impl.floyd_warshall

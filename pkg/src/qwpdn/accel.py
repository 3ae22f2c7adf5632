"""Kernel selection: numba-accelerated by default, pure numpy on request.

Set ``QWP_NO_NUMBA=1`` to force the numpy fallback; ``QWP_THREADS`` bounds
the numba thread pool (the kernels themselves are serial, so results are
bit-identical for any setting).
"""

import os

__all__ = [
    "NUMBA_ENABLED",
    "local_mean_sq",
    "collect_stacks",
    "shrink_stacks",
    "aggregate_stacks",
    "apply_thread_limit",
]


def _numba_disabled() -> bool:
    return os.environ.get("QWP_NO_NUMBA", "").strip() not in ("", "0")


if not _numba_disabled():
    # workqueue avoids probing optional TBB/OpenMP layers at import time
    os.environ.setdefault("NUMBA_THREADING_LAYER", "workqueue")
    try:
        from ._kernels_numba import (aggregate_stacks, collect_stacks,
                                     local_mean_sq, shrink_stacks)
        NUMBA_ENABLED = True
    except ImportError:
        from ._kernels_numpy import (aggregate_stacks, collect_stacks,
                                     local_mean_sq, shrink_stacks)
        NUMBA_ENABLED = False
else:
    from ._kernels_numpy import (aggregate_stacks, collect_stacks,
                                 local_mean_sq, shrink_stacks)
    NUMBA_ENABLED = False


def apply_thread_limit() -> int:
    """Clamp numba's thread pool to QWP_THREADS; returns the effective count."""
    if not NUMBA_ENABLED:
        return 1
    import numba

    limit = numba.config.NUMBA_NUM_THREADS
    raw = os.environ.get("QWP_THREADS", "").strip()
    if raw:
        try:
            limit = max(1, min(int(raw), limit))
        except ValueError:
            pass
    numba.set_num_threads(limit)
    return limit

"""Kernel backend selection.

Hot inner loops ship in two interchangeable implementations: a numba
``@njit`` fast path and a pure-numpy fallback.  The active backend is chosen
once at import time from the environment variable ``SKAGREE_BACKEND``:

* ``auto`` (default) — numba when importable, numpy otherwise;
* ``numba``          — require numba, raise if it cannot be imported;
* ``numpy``          — force the pure-numpy fallback.

Both implementations of every kernel are exported by :mod:`skagree._kernels`
so they can be tested against each other and benchmarked
(``benchmarks/compare_backends.py``).
"""

from __future__ import annotations

import os

_REQUESTED = os.environ.get("SKAGREE_BACKEND", "auto").strip().lower()
if _REQUESTED not in ("auto", "numba", "numpy"):
    raise RuntimeError(
        f"SKAGREE_BACKEND must be one of auto|numba|numpy, got {_REQUESTED!r}"
    )

try:
    import numba  # noqa: F401

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False

if _REQUESTED == "numba" and not HAS_NUMBA:
    raise RuntimeError("SKAGREE_BACKEND=numba but numba is not importable")

USE_NUMBA: bool = HAS_NUMBA if _REQUESTED == "auto" else (_REQUESTED == "numba")

ACTIVE: str = "numba" if USE_NUMBA else "numpy"


def set_thread_cap(n: int) -> None:
    """Cap worker threads used by the numba threading layer (no-op on numpy)."""
    if USE_NUMBA and n >= 1:
        try:
            import numba

            numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))
        except (ImportError, ValueError):
            pass

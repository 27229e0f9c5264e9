"""Kernel backend selection.

Hot inner loops have two implementations: a numba ``@njit`` version and a
pure-numpy fallback.  The fallback is selected by setting the environment
variable ``TORUSLAB_NO_NUMBA=1`` (useful on machines where numba is broken,
and for benchmarking the compiled kernels against their numpy twins).

``TORUSLAB_THREADS`` caps the numba thread pool.  Reductions in the kernels
are chunked with a fixed chunk count, so results are bit-identical for any
thread count.
"""

import os

import numpy as np


def numba_disabled() -> bool:
    return os.environ.get("TORUSLAB_NO_NUMBA", "0") not in ("0", "", "false")


_NUMBA_OK = None


def numba_available() -> bool:
    global _NUMBA_OK
    if numba_disabled():
        return False
    if _NUMBA_OK is None:
        try:
            import numba  # noqa: F401

            _NUMBA_OK = True
        except ImportError:
            _NUMBA_OK = False
    return _NUMBA_OK


def configure_threads() -> int:
    """Apply TORUSLAB_THREADS to numba; returns the thread count in use."""
    n = int(os.environ.get("TORUSLAB_THREADS", "0"))
    if n <= 0:
        n = os.cpu_count() or 1
    if numba_available():
        import numba

        n = min(n, numba.config.NUMBA_NUM_THREADS)
        numba.set_num_threads(n)
    return n


def backend_name() -> str:
    return "numba" if numba_available() else "numpy"


def asarray_c128(x):
    return np.ascontiguousarray(x, dtype=np.complex128)

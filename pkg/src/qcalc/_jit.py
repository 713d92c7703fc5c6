"""Optional numba acceleration.

Kernels in :mod:`qcalc.kernels` are decorated with :func:`maybe_njit`.  When
numba is importable and ``QCALC_DISABLE_NUMBA`` is unset (or ``0``), they are
compiled in nopython mode; otherwise the plain Python/numpy source runs
unchanged.  The flag is read once, at import time.
"""

import os

_FLAG = os.environ.get("QCALC_DISABLE_NUMBA", "").strip().lower()
_DISABLED = _FLAG not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError
    from numba import njit as _njit

    HAS_NUMBA = True
except ImportError:
    _njit = None
    HAS_NUMBA = False

BACKEND = "numba" if HAS_NUMBA else "python"


def maybe_njit(fn):
    if HAS_NUMBA:
        # fastmath stays off: summation order and rounding must be reproducible
        return _njit(cache=True, fastmath=False, error_model="numpy")(fn)
    return fn

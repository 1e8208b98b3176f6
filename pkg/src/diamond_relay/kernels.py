"""Backend selection for the subset-enumeration kernels.

The compiled Cython module is used when it imports; otherwise, or when the
environment variable ``DIAMOND_RELAY_PURE_PYTHON`` is set to a non-empty
value, the numpy fallback is used. ``BACKEND`` names the active one.
"""
import os

import numpy as np

from . import _kernels_py

if os.environ.get("DIAMOND_RELAY_PURE_PYTHON"):
    _impl = _kernels_py
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND = "python" if _impl is _kernels_py else "cython"


def available_backends():
    """Map backend name to module for every backend importable here."""
    found = {"python": _kernels_py}
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        found["cython"] = _ckernels
    return found


def subset_sums(values):
    return _impl.subset_sums(np.ascontiguousarray(values, dtype=np.float64))


def cut_minimum(x, y, cx, cy, coherent=False, penalty=0.0):
    return _impl.cut_minimum(
        np.ascontiguousarray(x, dtype=np.float64),
        np.ascontiguousarray(y, dtype=np.float64),
        float(cx),
        float(cy),
        bool(coherent),
        float(penalty),
    )


def polymatroid_violation(values, n, tol):
    return _impl.polymatroid_violation(np.ascontiguousarray(values, dtype=np.float64), int(n), float(tol))

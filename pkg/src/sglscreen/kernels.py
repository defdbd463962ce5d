"""Backend selection for the numerical kernels.

The compiled extension is used when it is importable; otherwise the pure
NumPy twin takes over transparently.  Set ``SGLSCREEN_PURE_PYTHON=1`` to
force the fallback (used by the backend benchmark).
"""

import os

from . import _kernels_py

if os.environ.get("SGLSCREEN_PURE_PYTHON"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

epsilon_norm = _impl.epsilon_norm
grouped_epsilon_norms = _impl.grouped_epsilon_norms
sgl_prox = _impl.sgl_prox


def available_backends():
    """Map backend name -> kernel module, for benchmarking both."""
    out = {"python": _kernels_py}
    try:
        from . import _kernels
        out["cython"] = _kernels
    except ImportError:
        pass
    return out

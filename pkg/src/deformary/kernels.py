"""Backend selection for the hot kernels.

The compiled extension is used when it was built and ``DEFORMARY_PURE`` is not
set; otherwise the pure-Python twins are used. Both expose the same functions.
"""

import os

from deformary import _kernels_py

try:
    if os.environ.get("DEFORMARY_PURE"):
        raise ImportError("pure backend requested")
    from deformary import _kernels as _compiled
except ImportError:
    _compiled = None

BACKEND = "cython" if _compiled is not None else "python"
_impl = _compiled if _compiled is not None else _kernels_py

howell_form = _impl.howell_form
fl_orbit_sizes = _impl.fl_orbit_sizes


def backends():
    """Map of available backend name -> module, for cross-checks and benchmarks."""
    out = {"python": _kernels_py}
    if _compiled is not None:
        out["cython"] = _compiled
    return out

"""Kernel backend selection: compiled extension with pure-Python fallback.

The compiled module is preferred when importable; set the environment
variable REEBTK_FORCE_BACKEND to "python" or "compiled" to override
(forcing "compiled" raises if the extension is unavailable).  Both
backends implement the same integration statement for statement and
agree bitwise.
"""

import os

from . import _kernels_py

_FORCE = os.environ.get("REEBTK_FORCE_BACKEND", "").strip().lower()

if _FORCE == "python":
    _impl = _kernels_py
    BACKEND = "python"
elif _FORCE == "compiled":
    from . import _kernels as _impl  # noqa: F401
    BACKEND = "compiled"
else:
    try:
        from . import _kernels as _impl
        BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

KIND_ALPHA = _kernels_py.KIND_ALPHA
KIND_KLEIN = _kernels_py.KIND_KLEIN
KIND_SEGMENT = _kernels_py.KIND_SEGMENT

rk4_orbit = _impl.rk4_orbit


def available_backends():
    """Importable kernel modules keyed by backend name."""
    mods = {"python": _kernels_py}
    try:
        from . import _kernels
        mods["compiled"] = _kernels
    except ImportError:
        pass
    return mods

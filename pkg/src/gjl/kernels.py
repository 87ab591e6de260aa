"""Backend selection for the chain enumeration kernel.

The compiled extension ``gjl._chain`` is used when it was built; otherwise, or
when the environment variable ``GJL_PURE_PYTHON`` is set to a non-empty value
other than ``0``, the pure-Python implementation is used.
"""

from __future__ import annotations

import os
from array import array

from . import _chain_py

if os.environ.get("GJL_PURE_PYTHON", "") not in ("", "0"):
    _impl = None
else:
    try:
        from . import _chain as _impl
    except ImportError:
        _impl = None

BACKEND = "python" if _impl is None else "cython"


def _ints(xs) -> array:
    return xs if isinstance(xs, array) and xs.typecode == "i" else array("i", xs)


def scan(ops, a, b, roots, goal, n_atoms, top, mode, backend=None):
    """Dispatch to the selected backend; ``backend`` forces "python" or "cython"."""
    use = backend or BACKEND
    if use == "cython":
        if _impl is None:
            raise RuntimeError("the compiled kernel is not available")
        fn = _impl.scan
    elif use == "python":
        fn = _chain_py.scan
    else:
        raise ValueError(f"unknown backend {backend!r}")
    return fn(_ints(ops), _ints(a), _ints(b), _ints(roots), goal, n_atoms, top, mode)


def compiled_available() -> bool:
    try:
        from . import _chain  # noqa: F401
    except ImportError:
        return False
    return True

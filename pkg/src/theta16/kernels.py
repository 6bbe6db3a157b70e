"""Kernel selection: the compiled module when importable, else pure Python.

Set ``THETA16_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernels

try:
    if os.environ.get("THETA16_PURE_PYTHON"):
        raise ImportError("pure-python kernels requested")
    from . import _ckernels
except ImportError:
    _ckernels = None

active = _ckernels if _ckernels is not None else _pykernels


def backend(name=None):
    """Return a kernel module by name ('cython' or 'python'); None means the active one."""
    if name is None:
        return active
    if name == "python":
        return _pykernels
    if name == "cython":
        if _ckernels is None:
            raise ImportError("compiled kernels are not built")
        return _ckernels
    raise ValueError(f"unknown backend {name!r}")


def available():
    return ["cython", "python"] if _ckernels is not None else ["python"]

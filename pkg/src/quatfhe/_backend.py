"""Kernel backend selection.

The compiled Cython extension is preferred when importable; otherwise the
pure-Python twin takes over. QUATFHE_BACKEND=python|cython forces a choice
at import time, and set_backend() switches at runtime (used by the
benchmark harness to compare both).
"""

import os

from . import _kernels_py

try:
    from . import _kernels as _kernels_cy
except ImportError:
    _kernels_cy = None

_BACKENDS = {"python": _kernels_py}
if _kernels_cy is not None:
    _BACKENDS["cython"] = _kernels_cy


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_BACKENDS))


def set_backend(name: str) -> None:
    global _active
    if name == "auto":
        _active = _kernels_cy if _kernels_cy is not None else _kernels_py
        return
    if name not in _BACKENDS:
        raise ValueError(
            f"unknown backend {name!r}; available: {available_backends()}")
    _active = _BACKENDS[name]


def get_backend() -> str:
    return _active.BACKEND_NAME


def kernels():
    """The active kernel module; call sites look this up per operation."""
    return _active


_active = _kernels_py
set_backend(os.environ.get("QUATFHE_BACKEND", "auto"))

"""Kernel backend selection.

The compiled Cython kernel is used when available; the pure-Python twin
is the fallback. Set SWARMCDM_BACKEND=python (or =compiled) to force a
backend, e.g. for the backend comparison benchmark.
"""

import os

from swarmcdm.engine import _kernels_py

try:
    from swarmcdm.engine import _kernels  # type: ignore[attr-defined]
except ImportError:
    _kernels = None

_FORCED = os.environ.get("SWARMCDM_BACKEND", "").strip().lower()


def get_kernels(backend: str | None = None):
    """Return the kernel module for `backend` ('compiled', 'python' or
    None for the import-time default)."""
    choice = backend or _FORCED or ("compiled" if _kernels is not None else "python")
    if choice == "compiled":
        if _kernels is None:
            raise RuntimeError("compiled kernel extension is not available")
        return _kernels
    if choice == "python":
        return _kernels_py
    raise ValueError(f"unknown backend {choice!r}")


DEFAULT_BACKEND = get_kernels().BACKEND

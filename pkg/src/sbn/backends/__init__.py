"""Kernel backend selection.

Two interchangeable implementations of the hot loops exist:

  * ``numpy``  - vectorized, always available
  * ``numba``  - @njit kernels, used by default when numba imports

Selection: the SBN_BACKEND environment variable ("numpy", "numba" or
"auto"), overridable per call via the ``backend=`` argument on inference
functions. Both backends produce bit-identical results; the numba one is
only faster. ``benchmarks/bench_backends.py`` compares them.
"""

from __future__ import annotations

import importlib
import os

from ..errors import ContractError

_numpy_impl = importlib.import_module(".._numpy_kernels", __name__)
_numba_impl = None
_numba_error: Exception | None = None


def _load_numba():
    global _numba_impl, _numba_error
    if _numba_impl is None and _numba_error is None:
        try:
            _numba_impl = importlib.import_module(".._numba_kernels", __name__)
        except ImportError as exc:  # numba missing or broken
            _numba_error = exc
    return _numba_impl


def numba_available() -> bool:
    return _load_numba() is not None


def active_backend() -> str:
    """Name of the backend that get_backend(None) would return."""
    requested = os.environ.get("SBN_BACKEND", "auto").strip().lower() or "auto"
    if requested == "auto":
        return "numba" if numba_available() else "numpy"
    return requested


def get_backend(name: str | None = None):
    """Resolve a backend module by name (None = SBN_BACKEND or auto)."""
    name = (name or active_backend()).strip().lower()
    if name == "numpy":
        return _numpy_impl
    if name == "numba":
        mod = _load_numba()
        if mod is None:
            raise ContractError(f"numba backend requested but unavailable: "
                                f"{_numba_error}")
        return mod
    raise ContractError(f"unknown backend {name!r} (use 'numpy' or 'numba')")

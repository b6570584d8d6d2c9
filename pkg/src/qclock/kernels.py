"""Backend selection for the hot-loop kernels.

The compiled Cython extension is preferred when importable; otherwise the
pure-numpy fallback takes over with identical semantics.  Setting the
environment variable ``QCLOCK_PURE_PYTHON=1`` forces the fallback (useful
for benchmarking and for debugging suspected kernel issues).
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernels_py


def _select():
    if os.environ.get("QCLOCK_PURE_PYTHON", "").strip() not in ("", "0"):
        return _kernels_py, "python"
    try:
        from . import _kernels  # compiled extension, built by setup.py
    except ImportError:
        return _kernels_py, "python"
    return _kernels, "compiled"


_impl, _BACKEND = _select()


def backend_name() -> str:
    """Which kernel implementation is active: 'compiled' or 'python'."""
    return _BACKEND


def exit_current_components(t, d, u, sigma0, hbar, m0, omega):
    """Vectorized exit-point current (jx, jz) over an array of times."""
    t = np.ascontiguousarray(t, dtype=np.float64)
    return _impl.exit_current_components(t, d, u, sigma0, hbar, m0, omega)


def _use_for_testing(name: str) -> None:
    """Swap the backend in place; benchmark/test hook, not thread-safe."""
    global _impl, _BACKEND
    if name == "python":
        _impl, _BACKEND = _kernels_py, "python"
        return
    if name == "compiled":
        from . import _kernels
        _impl, _BACKEND = _kernels, "compiled"
        return
    raise ValueError(f"unknown backend {name!r}")

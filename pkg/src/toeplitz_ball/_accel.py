"""Kernel backend selection.

The compiled ``_kernels`` extension is used when it was built; otherwise the
pure-Python twins are used.  Setting ``TOEPLITZ_BALL_PURE_PYTHON=1`` forces the
fallback (the test-suite runs both backends against each other).
"""
from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("TOEPLITZ_BALL_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _kernels_py

BACKEND: str = _impl.BACKEND
jet_mul = _impl.jet_mul
bareiss_rank = _impl.bareiss_rank


def compiled_available() -> bool:
    try:
        from . import _kernels  # noqa: F401
    except ImportError:
        return False
    return True

"""Kernel backend selection.

The compiled Cython kernel is used when it was built; otherwise, or when
``MINREV_PURE_PYTHON=1`` is set, the numpy/scipy fallback is imported.
"""
import os

from . import _kernels_py

if os.environ.get("MINREV_PURE_PYTHON", "") not in ("", "0"):
    _compiled = None
else:
    try:
        from . import _kernels as _compiled
    except ImportError:
        _compiled = None

if _compiled is not None:
    BACKEND = "cython"
    rank_targets = _compiled.rank_targets
else:
    BACKEND = "python"
    rank_targets = _kernels_py.rank_targets

BACKENDS = {"python": _kernels_py.rank_targets}
if _compiled is not None:
    BACKENDS["cython"] = _compiled.rank_targets

__all__ = ["BACKEND", "BACKENDS", "rank_targets"]

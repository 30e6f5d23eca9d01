"""Kernel selection: compiled int64 kernel when available, bigint fallback otherwise.

Set ``CRNDECOMP_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _pykernel

_ckernel = None
if not os.environ.get("CRNDECOMP_PURE_PYTHON"):
    try:
        from . import _ckernel  # type: ignore[no-redef]
    except ImportError:
        _ckernel = None

BACKEND = "cython" if _ckernel is not None else "python"


def echelon(rows, ncols):
    if _ckernel is not None:
        try:
            return _ckernel.echelon(rows, ncols)
        except OverflowError:
            pass
    return _pykernel.echelon(rows, ncols)

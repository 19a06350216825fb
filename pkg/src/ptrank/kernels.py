"""Backend selection for the integer kernels.

The compiled extension is used when it imports; otherwise the pure-Python
twin. Setting ``PTRANK_PURE_PYTHON=1`` forces the fallback.
"""

from __future__ import annotations

import os

from ptrank import _pykernels

if os.environ.get("PTRANK_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from ptrank import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"

rank_int = _impl.rank_int
det_int = _impl.det_int

__all__ = ["BACKEND", "rank_int", "det_int"]

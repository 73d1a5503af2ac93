"""Backend selection for the elimination kernel.

The compiled extension is used when it was built; set ``GRAPHNIL_PURE_PYTHON=1``
to force the pure-Python fallback.
"""
import os

from . import _pykernel

if os.environ.get("GRAPHNIL_PURE_PYTHON", "") not in ("", "0"):
    rref_int = _pykernel.rref_int
    BACKEND = "python"
else:
    try:
        from ._ckernel import rref_int
        BACKEND = "cython"
    except ImportError:  # extension not built
        rref_int = _pykernel.rref_int
        BACKEND = "python"

__all__ = ["rref_int", "BACKEND"]

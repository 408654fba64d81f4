"""Backend selection for the tridiagonal kernels.

The compiled ``_ckernels`` module is used when it imports; otherwise the
numpy reference in ``_kernels_py`` takes over.  Set ``PTSCATTER_PURE_PYTHON=1``
to force the fallback.
"""
import os

from . import _kernels_py as python_backend

try:
    if os.environ.get("PTSCATTER_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure Python requested")
    from . import _ckernels as compiled_backend
except ImportError:
    compiled_backend = None

_impl = compiled_backend if compiled_backend is not None else python_backend
BACKEND = "cython" if compiled_backend is not None else "python"

continuant = _impl.continuant
factor = _impl.factor
solve_factored = _impl.solve_factored
corners = _impl.corners
corners_batch = _impl.corners_batch

ALPHA_TOP = python_backend.ALPHA_TOP
ALPHA = python_backend.ALPHA
BETA_TOP = python_backend.BETA_TOP
BETA_BOT = python_backend.BETA_BOT
DET = python_backend.DET
DMAX = python_backend.DMAX
MINPIV = python_backend.MINPIV


def available_backends():
    """Mapping name -> module for every importable backend."""
    out = {"python": python_backend}
    if compiled_backend is not None:
        out["cython"] = compiled_backend
    return out

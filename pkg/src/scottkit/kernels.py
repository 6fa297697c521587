"""Selects the compiled refinement kernel when available.

Set ``SCOTTKIT_PURE_PYTHON=1`` to force the pure-Python twin.
"""
import os

from . import _kernels_py

BACKEND = "python"
refine_step = _kernels_py.refine_step

if not os.environ.get("SCOTTKIT_PURE_PYTHON"):
    try:
        from ._kernels import refine_step  # noqa: F811
        BACKEND = "cython"
    except ImportError:
        pass

__all__ = ["BACKEND", "refine_step"]

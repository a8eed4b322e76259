"""Kernel selection.

The compiled extension is used when importable; set ``VQABENCH_PURE_PYTHON=1``
to force the numpy fallback.
"""

import os

from . import _kernels_py

if os.environ.get("VQABENCH_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

apply_1q = _impl.apply_1q
apply_x = _impl.apply_x

__all__ = ["BACKEND", "apply_1q", "apply_x"]

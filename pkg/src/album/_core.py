"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the numpy
implementations in ``_pure`` are used. Setting ``ALBUM_PURE_PYTHON=1``
forces the fallback.
"""

import os

from . import _pure

BACKEND = "python"

if os.environ.get("ALBUM_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _impl
    except ImportError:  # extension not built
        _impl = _pure
    else:
        BACKEND = "cython"
else:
    _impl = _pure

jacobi_eigenvalues = _impl.jacobi_eigenvalues
soft_threshold = _impl.soft_threshold
hard_threshold = _impl.hard_threshold
project_ball = _impl.project_ball
project_sphere = _impl.project_sphere

__all__ = ["BACKEND", "jacobi_eigenvalues", "soft_threshold", "hard_threshold",
           "project_ball", "project_sphere"]

"""Dense complex linear algebra and quadrature kernels.

The hot loops live in a Cython extension (``_kernels``); a numpy fallback
with the same algorithms is used when the extension is not built or when the
environment variable ``UGABOR_PURE_PYTHON`` is set to a non-empty value.
"""

import os

if os.environ.get("UGABOR_PURE_PYTHON"):
    from . import _fallback as _backend
    BACKEND = "python"
else:
    try:
        from . import _kernels as _backend
        BACKEND = "cython"
    except ImportError:  # extension not compiled
        from . import _fallback as _backend
        BACKEND = "python"

from .linalg import det_lu, det_lu_extended, get_backend, singular_values, svd_extremes  # noqa: E402
from .quadrature import integrate  # noqa: E402

__all__ = ["BACKEND", "det_lu", "det_lu_extended", "singular_values", "svd_extremes", "get_backend", "integrate"]

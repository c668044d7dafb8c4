"""Backend selection for the inner loops.

The compiled extension is preferred; set ``PEGO_LAB_PURE=1`` to force the
numpy fallback.
"""
import os

if os.environ.get("PEGO_LAB_PURE"):
    from . import _kernels_py as _impl
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl
        BACKEND = "cython"
    except ImportError:
        from . import _kernels_py as _impl
        BACKEND = "python"

direct_laplace = _impl.direct_laplace
shift_moduli_sq = _impl.shift_moduli_sq
pairwise_sq_dist = _impl.pairwise_sq_dist

__all__ = ["BACKEND", "direct_laplace", "shift_moduli_sq", "pairwise_sq_dist"]

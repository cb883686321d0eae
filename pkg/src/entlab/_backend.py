"""Kernel selection.

The compiled Cython kernels are used when importable; otherwise (or when
``ENTLAB_PURE_PYTHON=1``) the numpy fallback is loaded. ``BACKEND`` names
the active implementation.

The compiled Jacobi eigensolver beats LAPACK only on very small matrices
(per-call overhead dominates there), so ``eigh`` hands anything larger than
``JACOBI_MAX_DIM`` to numpy.
"""
import os

from . import _fallback

if os.environ.get("ENTLAB_PURE_PYTHON", "") not in ("", "0"):
    _impl = _fallback
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _fallback
        BACKEND = "python"

JACOBI_MAX_DIM = 5


def eigh(m):
    if _impl is not _fallback and len(m) <= JACOBI_MAX_DIM:
        return _impl.eigh(m)
    return _fallback.eigh(m)


wootters_roots = _impl.wootters_roots


def implementations():
    """Map of backend name to kernel module, for benchmarks and tests."""
    impls = {"python": _fallback}
    try:
        from . import _kernels
    except ImportError:
        pass
    else:
        impls["cython"] = _kernels
    return impls

"""Numpy implementations of the compiled kernels in ``_kernels.pyx``.

Same signatures and output conventions; used when the extension is not
built or when ``ENTLAB_PURE_PYTHON`` is set.
"""
import numpy as np

_YY_SIGN = np.array([-1.0, 1.0, 1.0, -1.0])


def eigh(m):
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("eigh expects a square matrix")
    w, v = np.linalg.eigh(0.5 * (a + a.conj().T))
    return w[::-1].copy(), v[:, ::-1].copy()


def wootters_roots(rho):
    r = np.asarray(rho, dtype=np.complex128)
    if r.shape != (4, 4):
        raise ValueError("wootters_roots expects a 4x4 matrix")
    w, v = np.linalg.eigh(0.5 * (r + r.conj().T))
    wm = v * np.sqrt(np.clip(w, 0.0, None))
    # (Y x Y) W is a signed row reversal of W
    tau = wm.T @ (_YY_SIGN[:, None] * wm[::-1])
    return np.linalg.svd(tau, compute_uv=False)

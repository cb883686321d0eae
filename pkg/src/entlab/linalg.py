"""Dense complex-matrix helpers for small multi-qubit systems.

Matrices are plain ``numpy`` complex arrays. Subsystem structure is carried
separately as a tuple of dimensions (a "shape"). Basis ordering is row-major
with the leftmost factor most significant, i.e. ``|a b c>`` has index
``a*d_b*d_c + b*d_c + c``.
"""
from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np

from . import _backend
from .errors import ContractError, DimensionError, NotPSDError

TOL_HERM = 1e-9
TOL_PSD = 1e-10

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)


def identity(d: int) -> np.ndarray:
    return np.eye(d, dtype=complex)


def ket(index: int | Sequence[int], dims: Sequence[int] | int = 2) -> np.ndarray:
    """Computational basis vector ``|index>``.

    ``index`` may be a flat integer or a tuple of per-factor digits.
    """
    if isinstance(dims, int):
        dims = (dims,) * (len(index) if not isinstance(index, int) else 1)
    dims = tuple(dims)
    if not isinstance(index, int):
        index = int(np.ravel_multi_index(tuple(index), dims))
    v = np.zeros(int(np.prod(dims)), dtype=complex)
    v[index] = 1.0
    return v


def projector(vec: np.ndarray) -> np.ndarray:
    vec = np.asarray(vec, dtype=complex)
    return np.outer(vec, vec.conj())


def as_matrix(m) -> np.ndarray:
    """Complex 2-d array view of ``m``; rejects NaN/Inf."""
    a = np.asarray(getattr(m, "mat", m), dtype=complex)
    if a.ndim != 2:
        raise DimensionError(f"expected a matrix, got array of shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ContractError("matrix has non-finite entries")
    return a


def check_shape(dims: Iterable[int], n: int | None = None) -> tuple[int, ...]:
    """Validate a tensor shape and, optionally, that it factors ``n``."""
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 2 for d in dims):
        raise DimensionError(f"subsystem dimensions must all be >= 2, got {dims}")
    if n is not None and int(np.prod(dims)) != n:
        raise DimensionError(f"shape {dims} does not factor dimension {n}")
    return dims


def _check_square(m: np.ndarray) -> None:
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got {m.shape}")


def _index_set(idx, nfac: int) -> list[int]:
    if isinstance(idx, (int, np.integer)):
        idx = [int(idx)]
    out = sorted({int(i) for i in idx})
    if any(i < 0 or i >= nfac for i in out):
        raise DimensionError(f"factor index out of range in {out} for {nfac} factors")
    return out


def tensor(*ms) -> np.ndarray:
    """Kronecker product of any number of matrices or vectors."""
    if not ms:
        raise ValueError("tensor needs at least one operand")
    out = np.asarray(ms[0], dtype=complex)
    for m in ms[1:]:
        out = np.kron(out, np.asarray(m, dtype=complex))
    return out


def partial_trace(m, dims: Sequence[int], keep) -> np.ndarray:
    """Trace out every factor not listed in ``keep``.

    Parameters
    ----------
    m : array_like
        Square matrix on the space ``dims[0] x dims[1] x ...``.
    dims : sequence of int
        Subsystem dimensions.
    keep : int or iterable of int
        Factors to keep, in any order; the output keeps them in
        increasing factor order.
    """
    m = as_matrix(m)
    _check_square(m)
    dims = check_shape(dims, m.shape[0])
    n = len(dims)
    keep = _index_set(keep, n)
    if not keep:
        raise DimensionError("keep must name at least one factor")
    t = m.reshape(dims + dims)
    # trace from the highest factor down so remaining axis numbers stay valid
    cur = n
    for f in reversed(range(n)):
        if f not in keep:
            t = np.trace(t, axis1=f, axis2=f + cur)
            cur -= 1
    d = int(np.prod([dims[k] for k in keep]))
    return t.reshape(d, d)


def partial_transpose(m, dims: Sequence[int], flip) -> np.ndarray:
    """Transpose only the factors listed in ``flip``."""
    m = as_matrix(m)
    _check_square(m)
    dims = check_shape(dims, m.shape[0])
    n = len(dims)
    flip = _index_set(flip, n)
    axes = list(range(2 * n))
    for f in flip:
        axes[f], axes[n + f] = axes[n + f], axes[f]
    return m.reshape(dims + dims).transpose(axes).reshape(m.shape)


def permute_factors(m, dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors of a vector or square matrix.

    Factor ``perm[k]`` of the input becomes factor ``k`` of the output.
    """
    a = np.asarray(m, dtype=complex)
    dims = check_shape(dims, a.shape[0])
    n = len(dims)
    if sorted(perm) != list(range(n)):
        raise DimensionError(f"{perm} is not a permutation of {n} factors")
    if a.ndim == 1:
        return a.reshape(dims).transpose(perm).reshape(-1)
    axes = list(perm) + [n + p for p in perm]
    return a.reshape(dims + dims).transpose(axes).reshape(a.shape)


def is_hermitian(m, tol: float = TOL_HERM) -> bool:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    scale = max(1.0, float(np.linalg.norm(m)))
    return float(np.linalg.norm(m - m.conj().T)) <= tol * scale


def herm_eig(m, tol: float = TOL_HERM) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and eigenvectors (columns) of a Hermitian matrix.

    Raises
    ------
    ContractError
        If ``m`` deviates from Hermitian by more than ``tol`` (relative,
        Frobenius norm).
    """
    m = as_matrix(m)
    _check_square(m)
    if not is_hermitian(m, tol):
        raise ContractError("matrix is not Hermitian within tolerance")
    return _backend.eigh(m)


def eigvals_desc(m) -> np.ndarray:
    """Descending eigenvalues; no Hermiticity check (internal fast path)."""
    return _backend.eigh(m)[0]


def sqrt_psd(m, tol: float = TOL_PSD) -> np.ndarray:
    """Principal square root of a Hermitian positive semidefinite matrix.

    Eigenvalues in ``(-tol, 0)`` are treated as round-off and clamped to 0.
    """
    w, v = herm_eig(m)
    if w.size and w[-1] < -tol:
        raise NotPSDError(f"matrix has eigenvalue {w[-1]:.3e} < -{tol:g}")
    root = np.sqrt(np.clip(w, 0.0, None))
    return (v * root) @ v.conj().T


def dagger(m) -> np.ndarray:
    return np.asarray(m).conj().T


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a Ginibre matrix with phase fix."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * ph

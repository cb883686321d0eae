# cython: language_level=3
"""Compiled kernels: cyclic Jacobi for small complex Hermitian matrices and
the two-qubit Wootters spectrum built on top of it.

Both functions mirror ``entlab._fallback`` exactly in signature and output
ordering; ``entlab._backend`` picks one of the two at import time.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, hypot
from libc.stdlib cimport malloc, free

cnp.import_array()

cdef int MAX_SWEEPS = 64


cdef inline double cabs2(double complex z) noexcept nogil:
    return z.real * z.real + z.imag * z.imag


cdef int _jacobi(double complex* a, double complex* v, Py_ssize_t n) noexcept nogil:
    """Diagonalise the row-major ``n x n`` matrix ``a`` in place,
    accumulating rotations into ``v``.

    Returns the number of sweeps, or -1 if the sweep limit was hit.
    """
    cdef Py_ssize_t i, j, k, p, q
    cdef double total, b, theta, t, c, s, app, aqq
    cdef double complex e, ec, akp, akq, gqp, gqq, gqpc, gqqc
    cdef int sweep, rotated

    for i in range(n * n):
        v[i] = 0.0
    for i in range(n):
        v[i * n + i] = 1.0

    total = 0.0
    for i in range(n * n):
        total += cabs2(a[i])
    if total == 0.0:
        return 0
    # entries below this are round-off of the largest scale present
    total = 1e-17 * sqrt(total)

    for sweep in range(MAX_SWEEPS):
        rotated = 0
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = sqrt(cabs2(a[p * n + q]))
                # negligible relative to both diagonal entries: leave it
                if b <= total or b <= 1e-17 * sqrt(fabs(a[p * n + p].real * a[q * n + q].real)):
                    continue
                rotated = 1
                e = a[p * n + q] / b
                ec = e.conjugate()
                app = a[p * n + p].real
                aqq = a[q * n + q].real
                theta = (aqq - app) / (2.0 * b)
                if theta >= 0.0:
                    t = 1.0 / (theta + hypot(theta, 1.0))
                else:
                    t = -1.0 / (-theta + hypot(theta, 1.0))
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                # G = diag(1, conj(e)) R with R = [[c, s], [-s, c]]
                gqp = -s * ec
                gqq = c * ec
                gqpc = gqp.conjugate()
                gqqc = gqq.conjugate()
                for k in range(n):
                    akp = a[k * n + p]
                    akq = a[k * n + q]
                    a[k * n + p] = c * akp + gqp * akq
                    a[k * n + q] = s * akp + gqq * akq
                for k in range(n):
                    akp = a[p * n + k]
                    akq = a[q * n + k]
                    a[p * n + k] = c * akp + gqpc * akq
                    a[q * n + k] = s * akp + gqqc * akq
                a[p * n + q] = 0.0
                a[q * n + p] = 0.0
                a[p * n + p] = a[p * n + p].real
                a[q * n + q] = a[q * n + q].real
                for k in range(n):
                    akp = v[k * n + p]
                    akq = v[k * n + q]
                    v[k * n + p] = c * akp + gqp * akq
                    v[k * n + q] = s * akp + gqq * akq
        if not rotated:
            return sweep
    return -1


def eigh(m):
    """Eigen-decomposition of a Hermitian matrix, eigenvalues descending.

    Parameters
    ----------
    m : array_like, shape (n, n)
        Hermitian matrix. Only the Hermitian part is used.

    Returns
    -------
    w : ndarray of float, shape (n,)
    v : ndarray of complex, shape (n, n)
        Eigenvectors as columns, ``m = v @ diag(w) @ v.conj().T``.
    """
    src = np.asarray(m, dtype=np.complex128)
    if src.ndim != 2 or src.shape[0] != src.shape[1]:
        raise ValueError("eigh expects a square matrix")
    cdef const double complex[:, :] r = src
    cdef Py_ssize_t n = r.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] w = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] out = np.empty((n, n), dtype=np.complex128)
    cdef double complex* po = <double complex*> out.data
    cdef double* pw = <double*> w.data
    cdef double complex small_a[64]
    cdef double complex small_v[64]
    cdef Py_ssize_t small_ord[8]
    cdef double complex* pa = small_a
    cdef double complex* pv = small_v
    cdef Py_ssize_t* pord = small_ord
    cdef Py_ssize_t i, j, k
    cdef double x
    cdef int status = 0
    if n > 8:
        pa = <double complex*> malloc(n * n * sizeof(double complex))
        pv = <double complex*> malloc(n * n * sizeof(double complex))
        pord = <Py_ssize_t*> malloc(n * sizeof(Py_ssize_t))
        if pa == NULL or pv == NULL or pord == NULL:
            free(pa)
            free(pv)
            free(pord)
            raise MemoryError()
    try:
        with nogil:
            for i in range(n):
                for j in range(n):
                    pa[i * n + j] = 0.5 * (r[i, j] + r[j, i].conjugate())
            status = _jacobi(pa, pv, n)
            if status >= 0:
                # stable insertion sort of indices by descending eigenvalue
                for i in range(n):
                    pord[i] = i
                for i in range(1, n):
                    k = pord[i]
                    x = pa[k * n + k].real
                    j = i - 1
                    while j >= 0 and pa[pord[j] * n + pord[j]].real < x:
                        pord[j + 1] = pord[j]
                        j -= 1
                    pord[j + 1] = k
                for j in range(n):
                    pw[j] = pa[pord[j] * n + pord[j]].real
                for i in range(n):
                    for j in range(n):
                        po[i * n + j] = pv[i * n + pord[j]]
    finally:
        if n > 8:
            free(pa)
            free(pv)
            free(pord)
    if status < 0:
        raise ArithmeticError("Jacobi iteration did not converge")
    return w, out


cdef int _svals(double complex* a, Py_ssize_t n, double* out) noexcept nogil:
    """Singular values of the row-major ``n x n`` matrix ``a`` (destroyed)
    by one-sided Jacobi: rotate column pairs until mutually orthogonal,
    then read off the column norms.
    """
    cdef Py_ssize_t i, j, k
    cdef double al, be, g, theta, t, c, s
    cdef double complex gam, e, ec, x, y, jqp, jqq
    cdef int sweep, rotated
    for sweep in range(MAX_SWEEPS):
        rotated = 0
        for i in range(n - 1):
            for j in range(i + 1, n):
                al = 0.0
                be = 0.0
                gam = 0.0
                for k in range(n):
                    al += cabs2(a[k * n + i])
                    be += cabs2(a[k * n + j])
                    gam = gam + a[k * n + i].conjugate() * a[k * n + j]
                g = sqrt(cabs2(gam))
                if g <= 1e-15 * sqrt(al * be) or g <= 1e-300:
                    continue
                rotated = 1
                e = gam / g
                ec = e.conjugate()
                theta = (be - al) / (2.0 * g)
                if theta >= 0.0:
                    t = 1.0 / (theta + hypot(theta, 1.0))
                else:
                    t = -1.0 / (-theta + hypot(theta, 1.0))
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                jqp = -s * ec
                jqq = c * ec
                for k in range(n):
                    x = a[k * n + i]
                    y = a[k * n + j]
                    a[k * n + i] = c * x + jqp * y
                    a[k * n + j] = s * x + jqq * y
        if not rotated:
            break
    for j in range(n):
        al = 0.0
        for k in range(n):
            al += cabs2(a[k * n + j])
        out[j] = sqrt(al)
    return 0 if not rotated else -1


def wootters_roots(rho):
    """Square roots of the R-matrix spectrum of a two-qubit state, descending.

    With ``rho = W W^dagger`` (``W = V sqrt(w)`` from the eigen-decomposition)
    these are the singular values of the symmetric matrix
    ``W^T (Y x Y) W``. Working with singular values avoids taking square
    roots of eigenvalues that are zero up to round-off.
    """
    cdef const double complex[:, :] r = np.asarray(rho, dtype=np.complex128)
    if r.shape[0] != 4 or r.shape[1] != 4:
        raise ValueError("wootters_roots expects a 4x4 matrix")
    cdef double complex a[16]
    cdef double complex v[16]
    cdef double complex wm[16]
    cdef double complex tmp[16]
    cdef double complex tau[16]
    cdef double root[4]
    cdef double sv[4]
    cdef double sign[4]
    cdef double w, x
    cdef Py_ssize_t i, j, k
    cdef int status
    cdef double complex acc

    sign[0] = -1.0
    sign[1] = 1.0
    sign[2] = 1.0
    sign[3] = -1.0
    with nogil:
        for i in range(4):
            for j in range(4):
                a[i * 4 + j] = 0.5 * (r[i, j] + r[j, i].conjugate())
        status = _jacobi(a, v, 4)
        if status >= 0:
            for k in range(4):
                w = a[k * 4 + k].real
                root[k] = sqrt(w) if w > 0.0 else 0.0
            for i in range(4):
                for k in range(4):
                    wm[i * 4 + k] = v[i * 4 + k] * root[k]
            # (Y x Y) W is a signed row reversal of W
            for i in range(4):
                for j in range(4):
                    tmp[i * 4 + j] = sign[i] * wm[(3 - i) * 4 + j]
            for i in range(4):
                for j in range(4):
                    acc = 0.0
                    for k in range(4):
                        acc = acc + wm[k * 4 + i] * tmp[k * 4 + j]
                    tau[i * 4 + j] = acc
            status = _svals(tau, 4, sv)
            # insertion sort, descending
            for i in range(1, 4):
                x = sv[i]
                j = i - 1
                while j >= 0 and sv[j] < x:
                    sv[j + 1] = sv[j]
                    j -= 1
                sv[j + 1] = x
    if status < 0:
        raise ArithmeticError("Jacobi iteration did not converge")
    return np.array([sv[0], sv[1], sv[2], sv[3]])

# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: Hermitian Jacobi sweeps and keyed shot sampling.

Must stay bit-compatible with ``qcorr._fallback``.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, hypot
from libc.stdint cimport uint64_t

cnp.import_array()

ctypedef double complex cplx


cdef inline double _cabs(cplx z) nogil:
    return hypot(z.real, z.imag)


def jacobi_hermitian(cnp.ndarray[cnp.complex128_t, ndim=2] matrix, double tol, int max_sweeps):
    """Cyclic Jacobi on a Hermitian matrix.

    Returns ``(diagonal, vectors, sweeps)``; eigenvalues are unsorted.
    """
    cdef Py_ssize_t n = matrix.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] a_arr = np.array(matrix, dtype=np.complex128, order="C")
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] v_arr = np.eye(n, dtype=np.complex128)
    cdef cplx[:, ::1] a = a_arr
    cdef cplx[:, ::1] v = v_arr
    cdef Py_ssize_t p, q, k
    cdef int sweep = 0
    cdef double off, scale, r, theta, t, c, s
    cdef cplx phase, sp, akp, akq, vkp, vkq

    scale = 0.0
    for p in range(n):
        for q in range(n):
            scale += a[p, q].real * a[p, q].real + a[p, q].imag * a[p, q].imag
    scale = sqrt(scale)
    if scale < 1.0:
        scale = 1.0

    with nogil:
        while sweep < max_sweeps:
            off = 0.0
            for p in range(n):
                for q in range(p + 1, n):
                    off += 2.0 * (a[p, q].real * a[p, q].real + a[p, q].imag * a[p, q].imag)
            off = sqrt(off)
            if off <= tol * scale:
                break
            sweep += 1
            for p in range(n - 1):
                for q in range(p + 1, n):
                    r = _cabs(a[p, q])
                    if r == 0.0:
                        continue
                    phase = a[p, q] / r
                    theta = (a[q, q].real - a[p, p].real) / (2.0 * r)
                    if theta >= 0.0:
                        t = 1.0 / (theta + sqrt(1.0 + theta * theta))
                    else:
                        t = -1.0 / (-theta + sqrt(1.0 + theta * theta))
                    c = 1.0 / sqrt(1.0 + t * t)
                    s = t * c
                    sp = s * phase
                    # columns: A <- A J
                    for k in range(n):
                        akp = a[k, p]
                        akq = a[k, q]
                        a[k, p] = c * akp - sp.conjugate() * akq
                        a[k, q] = sp * akp + c * akq
                    # rows: A <- J^H A
                    for k in range(n):
                        akp = a[p, k]
                        akq = a[q, k]
                        a[p, k] = c * akp - sp * akq
                        a[q, k] = sp.conjugate() * akp + c * akq
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    a[p, p] = a[p, p].real
                    a[q, q] = a[q, q].real
                    for k in range(n):
                        vkp = v[k, p]
                        vkq = v[k, q]
                        v[k, p] = c * vkp - sp.conjugate() * vkq
                        v[k, q] = sp * vkp + c * vkq

    diag = np.array([a_arr[k, k].real for k in range(n)])
    return diag, v_arr, sweep


cdef inline uint64_t _mix64(uint64_t z) nogil:
    z = z + <uint64_t>0x9E3779B97F4A7C15ULL
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EBULL
    return z ^ (z >> 31)


def sample_categories(cnp.ndarray[cnp.float64_t, ndim=1] cdf, uint64_t seed,
                      uint64_t stream, uint64_t start, uint64_t count):
    """Count categories for shots ``start .. start+count-1`` of one stream."""
    cdef Py_ssize_t m = cdf.shape[0]
    cdef double[::1] c = np.ascontiguousarray(cdf)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out_arr = np.zeros(m, dtype=np.int64)
    cdef long long[::1] out = out_arr
    cdef uint64_t key = _mix64(_mix64(seed) ^ stream)
    cdef uint64_t i, bits
    cdef double u
    cdef Py_ssize_t lo, hi, mid
    cdef Py_ssize_t last = m - 1
    while last > 0 and c[last] == c[last - 1]:
        last -= 1
    with nogil:
        for i in range(start, start + count):
            bits = _mix64(key + i)
            u = <double>(bits >> 11) * (1.0 / 9007199254740992.0)
            # first index with cdf > u
            lo = 0
            hi = m
            while lo < hi:
                mid = (lo + hi) >> 1
                if c[mid] > u:
                    hi = mid
                else:
                    lo = mid + 1
            if lo > last:
                lo = last
            out[lo] += 1
    return out_arr

# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: eps-norm evaluation and the sparse-group prox.

Signature-compatible with ``sglscreen._kernels_py`` (the pure-NumPy
fallback); see that module for the algorithm notes.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt
from libc.stdlib cimport free, malloc, qsort

cnp.import_array()


cdef int _cmp_desc(const void *pa, const void *pb) noexcept nogil:
    cdef double a = (<const double *> pa)[0]
    cdef double b = (<const double *> pb)[0]
    if a < b:
        return 1
    if a > b:
        return -1
    return 0


cdef double _scan_root(double *a, Py_ssize_t d, double eps) noexcept nogil:
    # a: |x| sorted descending (a[0] > 0), 0 < eps < 1
    cdef double c = 1.0 - eps
    cdef double s1 = 0.0, s2 = 0.0
    cdef double acoef, disc, root, cq, hi, lo, slack
    cdef double tol = 1e-12 * a[0]
    cdef double best = 0.0, best_slack = 1e300
    cdef bint ok
    cdef Py_ssize_t k
    for k in range(d):
        s1 += a[k]
        s2 += a[k] * a[k]
        acoef = (k + 1) * (c * c) - eps * eps
        disc = (c * s1) * (c * s1) - acoef * s2
        ok = disc >= 0.0
        if disc < 0.0:
            disc = 0.0
        root = s2 / (c * s1 + sqrt(disc))
        cq = c * root
        hi = a[k]
        lo = a[k + 1] if k + 1 < d else 0.0
        if ok and cq <= hi + tol and cq >= lo - tol:
            return root
        slack = lo - cq if lo - cq > cq - hi else cq - hi
        if slack < best_slack:
            best_slack = slack
            best = root
    return best


cdef double _epsilon_norm_c(const double *x, Py_ssize_t d, double eps) nogil:
    cdef double amax = 0.0, s = 0.0, val
    cdef Py_ssize_t i
    cdef double *buf
    cdef double out
    for i in range(d):
        val = x[i] if x[i] >= 0.0 else -x[i]
        if val > amax:
            amax = val
    if amax == 0.0:
        return 0.0
    if eps <= 0.0:
        return amax
    if eps >= 1.0:
        for i in range(d):
            s += x[i] * x[i]
        return sqrt(s)
    buf = <double *> malloc(d * sizeof(double))
    if buf == NULL:
        with gil:
            raise MemoryError()
    for i in range(d):
        buf[i] = x[i] if x[i] >= 0.0 else -x[i]
    qsort(buf, d, sizeof(double), _cmp_desc)
    out = _scan_root(buf, d, eps)
    free(buf)
    return out


def epsilon_norm(x, double eps):
    """eps-norm of a 1-d vector (compiled path)."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] arr = np.ascontiguousarray(
        x, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] srt
    if arr.shape[0] == 0:
        return 0.0
    if arr.shape[0] > 256 and 0.0 < eps < 1.0:
        # large vectors: numpy's sort beats qsort-with-callback; the scan
        # stays in C
        srt = np.ascontiguousarray(np.sort(np.abs(arr))[::-1])
        if srt[0] == 0.0:
            return 0.0
        return _scan_root(<double *> srt.data, srt.shape[0], eps)
    return _epsilon_norm_c(<const double *> arr.data, arr.shape[0], eps)


def grouped_epsilon_norms(x, indices, indptr, eps):
    """eps-norm of each group slice of ``x``; ``eps`` is per group."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xa = np.ascontiguousarray(
        x, dtype=np.float64)
    cdef cnp.ndarray[cnp.intp_t, ndim=1] idx = np.ascontiguousarray(
        indices, dtype=np.intp)
    cdef cnp.ndarray[cnp.intp_t, ndim=1] ptr = np.ascontiguousarray(
        indptr, dtype=np.intp)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ea = np.ascontiguousarray(
        eps, dtype=np.float64)
    cdef Py_ssize_t m = ptr.shape[0] - 1
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(m, dtype=np.float64)
    cdef Py_ssize_t g, j, size, maxsize = 0
    cdef double *buf
    for g in range(m):
        size = ptr[g + 1] - ptr[g]
        if size > maxsize:
            maxsize = size
    if maxsize == 0:
        return out
    buf = <double *> malloc(maxsize * sizeof(double))
    if buf == NULL:
        raise MemoryError()
    for g in range(m):
        size = ptr[g + 1] - ptr[g]
        for j in range(size):
            buf[j] = xa[idx[ptr[g] + j]]
        out[g] = _epsilon_norm_c(buf, size, ea[g])
    free(buf)
    return out


def sgl_prox(z, l1t, l2t, indices, indptr):
    """Prox of the weighted sparse-group penalty at ``z`` (compiled path)."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] za = np.ascontiguousarray(
        z, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] t1 = np.ascontiguousarray(
        l1t, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] t2 = np.ascontiguousarray(
        l2t, dtype=np.float64)
    cdef cnp.ndarray[cnp.intp_t, ndim=1] idx = np.ascontiguousarray(
        indices, dtype=np.intp)
    cdef cnp.ndarray[cnp.intp_t, ndim=1] ptr = np.ascontiguousarray(
        indptr, dtype=np.intp)
    cdef Py_ssize_t p = za.shape[0]
    cdef Py_ssize_t m = ptr.shape[0] - 1
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(p, dtype=np.float64)
    cdef Py_ssize_t i, g, j
    cdef double a, t, nrm, sc
    for i in range(p):
        a = za[i]
        t = t1[i]
        if a > t:
            out[i] = a - t
        elif a < -t:
            out[i] = a + t
        else:
            out[i] = 0.0
    for g in range(m):
        nrm = 0.0
        for j in range(ptr[g], ptr[g + 1]):
            nrm += out[idx[j]] * out[idx[j]]
        nrm = sqrt(nrm)
        if nrm <= t2[g]:
            for j in range(ptr[g], ptr[g + 1]):
                out[idx[j]] = 0.0
        else:
            sc = 1.0 - t2[g] / nrm
            if sc != 1.0:
                for j in range(ptr[g], ptr[g + 1]):
                    out[idx[j]] *= sc
    return out

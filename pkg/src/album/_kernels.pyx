# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: Jacobi eigenvalue sweeps and the vector prox operators.

Mirrors ``album._pure`` function for function; ``album._core`` picks one.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, sqrt

cnp.import_array()


cdef double _offdiag_norm(double[:, ::1] a, Py_ssize_t n) nogil:
    cdef Py_ssize_t i, j
    cdef double s = 0.0
    for i in range(n):
        for j in range(n):
            if i != j:
                s += a[i, j] * a[i, j]
    return sqrt(s)


def jacobi_eigenvalues(object matrix, double rtol=1e-12, int max_sweeps=100):
    cdef cnp.ndarray[double, ndim=2, mode="c"] arr = np.array(matrix, dtype=np.float64, order="C", copy=True)
    cdef double[:, ::1] a = arr
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t p, q, i, sweep
    cdef double app, aqq, apq, theta, t, c, s, aip, aiq
    cdef double scale = 0.0
    for p in range(n):
        for q in range(n):
            scale += a[p, q] * a[p, q]
    scale = sqrt(scale)
    cdef double target = rtol * scale
    with nogil:
        for sweep in range(max_sweeps):
            if _offdiag_norm(a, n) <= target:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = a[p, q]
                    if apq == 0.0:
                        continue
                    app = a[p, p]
                    aqq = a[q, q]
                    theta = (aqq - app) / (2.0 * apq)
                    if fabs(theta) > 1e150:
                        t = 0.5 / theta
                    else:
                        t = 1.0 / (fabs(theta) + sqrt(theta * theta + 1.0))
                        if theta < 0.0:
                            t = -t
                    c = 1.0 / sqrt(t * t + 1.0)
                    s = t * c
                    for i in range(n):
                        aip = a[i, p]
                        aiq = a[i, q]
                        a[i, p] = c * aip - s * aiq
                        a[i, q] = s * aip + c * aiq
                    for i in range(n):
                        aip = a[p, i]
                        aiq = a[q, i]
                        a[p, i] = c * aip - s * aiq
                        a[q, i] = s * aip + c * aiq
                    a[p, q] = 0.0
                    a[q, p] = 0.0
    out = np.empty(n, dtype=np.float64)
    for p in range(n):
        out[p] = a[p, p]
    return np.sort(out)


def soft_threshold(object v, object thresh):
    cdef const double[::1] x = np.ascontiguousarray(v, dtype=np.float64)
    cdef Py_ssize_t i, n = x.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef const double[::1] w
    cdef double xi, t
    if np.ndim(thresh) == 0:
        t = thresh
        for i in range(n):
            xi = x[i]
            o[i] = xi - t if xi > t else (xi + t if xi < -t else 0.0)
        return out
    w = np.ascontiguousarray(np.broadcast_to(thresh, (n,)), dtype=np.float64)
    for i in range(n):
        xi = x[i]
        o[i] = xi - w[i] if xi > w[i] else (xi + w[i] if xi < -w[i] else 0.0)
    return out


cdef inline bint _worse(const double[::1] x, Py_ssize_t i, Py_ssize_t j) nogil:
    # i ranks below j: smaller magnitude, or equal magnitude and larger index
    cdef double a = fabs(x[i]), b = fabs(x[j])
    return a < b or (a == b and i > j)


cdef void _sift_down(const double[::1] x, Py_ssize_t[::1] heap, Py_ssize_t size,
                     Py_ssize_t k) nogil:
    cdef Py_ssize_t child, tmp
    while True:
        child = 2 * k + 1
        if child >= size:
            return
        if child + 1 < size and _worse(x, heap[child + 1], heap[child]):
            child += 1
        if not _worse(x, heap[child], heap[k]):
            return
        tmp = heap[k]
        heap[k] = heap[child]
        heap[child] = tmp
        k = child


def hard_threshold(object v, Py_ssize_t s):
    """Keep the ``s`` largest magnitudes; ties go to the lowest indices."""
    cdef const double[::1] x = np.ascontiguousarray(v, dtype=np.float64)
    cdef Py_ssize_t n = x.shape[0]
    out = np.zeros(n, dtype=np.float64)
    if s <= 0:
        return out
    if s >= n:
        out[:] = x
        return out
    cdef double[::1] o = out
    # min-heap of the s best seen so far, worst at the root
    keep = np.arange(s, dtype=np.intp)
    cdef Py_ssize_t[::1] heap = keep
    cdef Py_ssize_t i, j
    with nogil:
        j = s // 2
        while j > 0:
            j -= 1
            _sift_down(x, heap, s, j)
        for i in range(s, n):
            if fabs(x[i]) > fabs(x[heap[0]]):
                heap[0] = i
                _sift_down(x, heap, s, 0)
        for j in range(s):
            o[heap[j]] = x[heap[j]]
    return out


def project_ball(object v, object center, double radius):
    cdef const double[::1] x = np.ascontiguousarray(v, dtype=np.float64)
    cdef const double[::1] c = np.ascontiguousarray(center, dtype=np.float64)
    cdef Py_ssize_t i, n = x.shape[0]
    cdef double d2 = 0.0, scale
    for i in range(n):
        d2 += (x[i] - c[i]) * (x[i] - c[i])
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    if d2 <= radius * radius:
        for i in range(n):
            o[i] = x[i]
        return out
    scale = radius / sqrt(d2)
    for i in range(n):
        o[i] = c[i] + scale * (x[i] - c[i])
    return out


def project_sphere(object v, object center, double radius):
    cdef const double[::1] x = np.ascontiguousarray(v, dtype=np.float64)
    cdef const double[::1] c = np.ascontiguousarray(center, dtype=np.float64)
    cdef Py_ssize_t i, n = x.shape[0]
    cdef double d2 = 0.0, scale
    for i in range(n):
        d2 += (x[i] - c[i]) * (x[i] - c[i])
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    if d2 == 0.0:
        for i in range(n):
            o[i] = c[i]
        o[0] += radius
        return out
    scale = radius / sqrt(d2)
    for i in range(n):
        o[i] = c[i] + scale * (x[i] - c[i])
    return out

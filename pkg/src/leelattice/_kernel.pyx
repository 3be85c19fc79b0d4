# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Lee sphere enumeration; mirrors ``_kernel_py.sphere_search``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport floor, ceil, fabs, INFINITY
from libc.stdlib cimport malloc, free

cnp.import_array()


cdef struct Search:
    long long *b          # (m, k) row-major
    double *r
    long long *x
    long long *acc
    long long *tail
    long long *best_z
    long long *nodes
    int n, k, m
    long long q
    double R, tol, best
    bint shrink, found
    long long leaves


cdef void _leaf(Search *s, double partial) noexcept nogil:
    cdef int t
    cdef long long a, w, zt
    cdef double d = partial
    cdef double lim = s.R + s.tol
    s.leaves += 1
    for t in range(s.m):
        a = s.acc[t]
        w = <long long>floor((s.r[s.k + t] - a) / s.q + 0.5)
        zt = a + s.q * w
        s.tail[t] = zt
        d += fabs(s.r[s.k + t] - zt)
        if d > lim:
            return
    if d < s.best:
        s.best = d
        s.found = True
        for t in range(s.k):
            s.best_z[t] = s.x[t]
        for t in range(s.m):
            s.best_z[s.k + t] = s.tail[t]
        if s.shrink:
            s.R = d


cdef void _descend(Search *s, int j, double partial) noexcept nogil:
    cdef int t
    cdef long long v
    cdef double rj, rem, dev
    if j == s.k:
        _leaf(s, partial)
        return
    rj = s.r[j]
    v = <long long>ceil(rj - (s.R - partial) - s.tol)
    for t in range(s.m):
        s.acc[t] += s.b[t * s.k + j] * v
    s.x[j] = v
    while True:
        rem = s.R + s.tol - partial
        if v > rj + rem:
            break
        dev = fabs(v - rj)
        if dev <= rem:
            s.nodes[j + 1] += 1
            _descend(s, j + 1, partial + dev)
        v += 1
        s.x[j] = v
        for t in range(s.m):
            s.acc[t] += s.b[t * s.k + j]
    for t in range(s.m):
        s.acc[t] -= s.b[t * s.k + j] * v


def sphere_search(b_block, q, r, double radius, bint shrink):
    cdef cnp.ndarray[cnp.int64_t, ndim=2, mode="c"] b = np.ascontiguousarray(b_block, dtype=np.int64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1, mode="c"] rv = np.ascontiguousarray(r, dtype=np.float64)
    cdef int n = rv.shape[0]
    cdef int m = b.shape[0]
    cdef int k = n - m
    cdef cnp.ndarray[cnp.int64_t, ndim=1] nodes = np.zeros(k + 1, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] best_z = np.zeros(n, dtype=np.int64)
    cdef Search s
    cdef int t
    s.b = <long long *>b.data if m > 0 else NULL
    s.r = <double *>rv.data
    s.n = n
    s.k = k
    s.m = m
    s.q = q
    s.R = radius
    s.tol = 1e-9 * (1.0 + radius)
    s.best = INFINITY
    s.shrink = shrink
    s.found = False
    s.leaves = 0
    s.nodes = <long long *>nodes.data
    s.best_z = <long long *>best_z.data
    s.x = <long long *>malloc((k + 1) * sizeof(long long))
    s.acc = <long long *>malloc((m + 1) * sizeof(long long))
    s.tail = <long long *>malloc((m + 1) * sizeof(long long))
    if s.x == NULL or s.acc == NULL or s.tail == NULL:
        free(s.x); free(s.acc); free(s.tail)
        raise MemoryError()
    for t in range(m):
        s.acc[t] = 0
    s.nodes[0] = 1
    with nogil:
        _descend(&s, 0, 0.0)
    free(s.x); free(s.acc); free(s.tail)
    if not s.found:
        return False, best_z, float("inf"), nodes, s.leaves
    return True, best_z, s.best, nodes, s.leaves

# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the simplex pivot loop and the shortest-path closure.

Mirrors ``_kernels_py`` rule for rule; see that module for the contracts.
"""

from libc.math cimport INFINITY, fabs
from libc.stdlib cimport free, malloc


cdef enum:
    OPTIMAL = 0
    UNBOUNDED = 1
    ITERATION_LIMIT = 2


cdef void _pivot(double[:, ::1] T, Py_ssize_t r, Py_ssize_t j, Py_ssize_t* nz) noexcept nogil:
    cdef Py_ssize_t i, k, q, count = 0
    cdef Py_ssize_t nrow = T.shape[0]
    cdef Py_ssize_t ncol = T.shape[1]
    cdef double piv = T[r, j]
    cdef double f
    for k in range(ncol):
        T[r, k] = T[r, k] / piv
        if T[r, k] != 0.0:
            nz[count] = k
            count += 1
    T[r, j] = 1.0
    # the pivot row is mostly zeros; only its nonzero columns change
    for i in range(nrow):
        if i == r:
            continue
        f = T[i, j]
        if f == 0.0:
            continue
        for q in range(count):
            k = nz[q]
            T[i, k] -= f * T[r, k]
        T[i, j] = 0.0


def simplex_iterate(double[:, ::1] T, Py_ssize_t[::1] basis, Py_ssize_t n_enter,
                    double pivot_tol, double opt_tol, Py_ssize_t max_iter):
    cdef Py_ssize_t* nz = <Py_ssize_t*> malloc(T.shape[1] * sizeof(Py_ssize_t))
    if nz == NULL:
        raise MemoryError()
    try:
        return _iterate(T, basis, n_enter, pivot_tol, opt_tol, max_iter, nz)
    finally:
        free(nz)


cdef tuple _iterate(double[:, ::1] T, Py_ssize_t[::1] basis, Py_ssize_t n_enter,
                    double pivot_tol, double opt_tol, Py_ssize_t max_iter, Py_ssize_t* nz):
    cdef Py_ssize_t rows = T.shape[0] - 1
    cdef Py_ssize_t rhs = T.shape[1] - 1
    cdef Py_ssize_t it, i, j, r
    cdef double best, ratio, tol, colmax
    with nogil:
        for it in range(max_iter):
            j = -1
            for i in range(n_enter):
                if T[rows, i] < -opt_tol:
                    j = i
                    break
            if j < 0:
                with gil:
                    return OPTIMAL, it, -1
            # pivot tolerance scales with the column so rounding noise never pivots
            colmax = 1.0
            for i in range(rows):
                if fabs(T[i, j]) > colmax:
                    colmax = fabs(T[i, j])
            tol = pivot_tol * colmax
            # negative right-hand sides are rounding drift; treat them as 0
            best = INFINITY
            for i in range(rows):
                if T[i, j] > tol:
                    ratio = (T[i, rhs] if T[i, rhs] > 0.0 else 0.0) / T[i, j]
                    if ratio < best:
                        best = ratio
            if best == INFINITY:
                with gil:
                    return UNBOUNDED, it, j
            r = -1
            for i in range(rows):
                if T[i, j] > tol:
                    ratio = (T[i, rhs] if T[i, rhs] > 0.0 else 0.0) / T[i, j]
                    if ratio <= best + 1e-12 and (r < 0 or basis[i] < basis[r]):
                        r = i
            if T[r, rhs] < 0.0:
                T[r, rhs] = 0.0
            _pivot(T, r, j, nz)
            basis[r] = j
    return ITERATION_LIMIT, max_iter, -1


def floyd_warshall(double[:, ::1] D, Py_ssize_t[:, ::1] nxt):
    cdef Py_ssize_t n = D.shape[0]
    cdef Py_ssize_t i, j, k
    cdef double dik, via
    with nogil:
        for k in range(n):
            for i in range(n):
                dik = D[i, k]
                if dik == INFINITY:
                    continue
                for j in range(n):
                    via = dik + D[k, j]
                    if via < D[i, j]:
                        D[i, j] = via
                        nxt[i, j] = nxt[i, k]

# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the kernels in ``_pykernels``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport exp, sqrt, INFINITY

cnp.import_array()

cdef enum:
    C_T = 0
    C_S = 1
    C_ST = 2

KIND_T, KIND_S, KIND_ST = C_T, C_S, C_ST


def bmu_assign(X, W):
    cdef const double[:, ::1] x = np.ascontiguousarray(X, dtype=np.float64)
    cdef const double[:, ::1] w = np.ascontiguousarray(W, dtype=np.float64)
    cdef Py_ssize_t V = x.shape[0], K = w.shape[0], T = x.shape[1]
    cdef Py_ssize_t v, k, t, best
    cdef double d, diff, dbest
    out = np.empty(V, dtype=np.int64)
    cdef cnp.int64_t[::1] o = out
    with nogil:
        for v in range(V):
            best = 0
            dbest = INFINITY
            for k in range(K):
                d = 0.0
                for t in range(T):
                    diff = x[v, t] - w[k, t]
                    d += diff * diff
                if d < dbest:
                    dbest = d
                    best = k
            o[v] = best
    return out


def batch_update(X, bmu, sq_grid, double sigma):
    cdef const double[:, ::1] x = np.ascontiguousarray(X, dtype=np.float64)
    cdef const cnp.int64_t[::1] c = np.ascontiguousarray(bmu, dtype=np.int64)
    cdef const double[:, ::1] g = np.ascontiguousarray(sq_grid, dtype=np.float64)
    cdef Py_ssize_t V = x.shape[0], T = x.shape[1], K = g.shape[0]
    cdef Py_ssize_t v, k, j, t
    cdef double inv = 1.0 / (2.0 * sigma * sigma)
    cdef double shift, h, den
    counts_arr = np.zeros(K, dtype=np.float64)
    sums_arr = np.zeros((K, T), dtype=np.float64)
    out = np.empty((K, T), dtype=np.float64)
    cdef double[::1] counts = counts_arr
    cdef double[:, ::1] sums = sums_arr
    cdef double[:, ::1] o = out
    with nogil:
        for v in range(V):
            counts[c[v]] += 1.0
            for t in range(T):
                sums[c[v], t] += x[v, t]
        for k in range(K):
            shift = -INFINITY
            for j in range(K):
                if counts[j] > 0 and -g[k, j] * inv > shift:
                    shift = -g[k, j] * inv
            den = 0.0
            for t in range(T):
                o[k, t] = 0.0
            for j in range(K):
                if counts[j] > 0:
                    h = exp(-g[k, j] * inv - shift)
                    den += h * counts[j]
                    for t in range(T):
                        o[k, t] += h * sums[j, t]
            for t in range(T):
                o[k, t] /= den
    return out


cdef double _pair(const double[:, :, ::1] w, const cnp.int64_t[:, ::1] a,
                  Py_ssize_t p, Py_ssize_t q, int kind,
                  double[:, ::1] E, double[:, ::1] H, cnp.int64_t[:, ::1] joint,
                  cnp.int64_t[::1] na, cnp.int64_t[::1] nb) noexcept nogil:
    cdef Py_ssize_t K = w.shape[1], T = w.shape[2], V = a.shape[1]
    cdef Py_ssize_t x, y, t, v, arg
    cdef double d, diff, best, total = 0.0
    if kind != C_S:
        for x in range(K):
            for y in range(K):
                d = 0.0
                for t in range(T):
                    diff = w[p, x, t] - w[q, y, t]
                    d += diff * diff
                E[x, y] = sqrt(d)
    if kind != C_T:
        for x in range(K):
            na[x] = 0
            nb[x] = 0
            for y in range(K):
                joint[x, y] = 0
        for v in range(V):
            joint[a[p, v], a[q, v]] += 1
            na[a[p, v]] += 1
            nb[a[q, v]] += 1
        for x in range(K):
            for y in range(K):
                H[x, y] = <double>(na[x] + nb[y] - 2 * joint[x, y]) / V
    if kind == C_T or kind == C_S:
        if kind == C_S:
            E = H
        for x in range(K):
            best = INFINITY
            for y in range(K):
                if E[x, y] < best:
                    best = E[x, y]
            total += best
        for y in range(K):
            best = INFINITY
            for x in range(K):
                if E[x, y] < best:
                    best = E[x, y]
            total += best
        return total / (2.0 * V)
    for x in range(K):
        best = INFINITY
        arg = 0
        for y in range(K):
            if E[x, y] < best:
                best = E[x, y]
                arg = y
        total += H[x, arg]
    for y in range(K):
        best = INFINITY
        arg = 0
        for x in range(K):
            if E[x, y] < best:
                best = E[x, y]
                arg = x
        total += H[arg, y]
    return total / 2.0


def smd_matrix(W, A, int kind):
    cdef const double[:, :, ::1] w = np.ascontiguousarray(W, dtype=np.float64)
    cdef const cnp.int64_t[:, ::1] a = np.ascontiguousarray(A, dtype=np.int64)
    cdef Py_ssize_t n = w.shape[0], K = w.shape[1], i, j
    D_arr = np.zeros((n, n), dtype=np.float64)
    cdef double[:, ::1] D = D_arr
    cdef double[:, ::1] E = np.empty((K, K), dtype=np.float64)
    cdef double[:, ::1] H = np.empty((K, K), dtype=np.float64)
    cdef cnp.int64_t[:, ::1] joint = np.empty((K, K), dtype=np.int64)
    cdef cnp.int64_t[::1] na = np.empty(K, dtype=np.int64)
    cdef cnp.int64_t[::1] nb = np.empty(K, dtype=np.int64)
    with nogil:
        for i in range(n):
            for j in range(i + 1, n):
                D[i, j] = _pair(w, a, i, j, kind, E, H, joint, na, nb)
                D[j, i] = D[i, j]
    return D_arr


def floyd_warshall(D):
    out = np.array(D, dtype=np.float64, copy=True, order="C")
    cdef double[:, ::1] d = out
    cdef Py_ssize_t n = d.shape[0], i, j, k, it
    cdef double via
    cdef bint changed = True
    with nogil:
        it = 0
        while changed and it <= n:
            changed = False
            for k in range(n):
                for i in range(n):
                    for j in range(n):
                        via = d[i, k] + d[k, j]
                        if via < d[i, j]:
                            d[i, j] = via
                            changed = True
            it += 1
    return out

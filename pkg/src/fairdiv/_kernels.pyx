# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernels (int64 only; see ``_pykernels`` for the contract)."""

import numpy as np
from libc.stdint cimport int64_t, uint8_t, INT64_MAX


cdef inline void _decode(int64_t index, Py_ssize_t n, Py_ssize_t m, int64_t[::1] digits) noexcept nogil:
    cdef Py_ssize_t g
    for g in range(m - 1, -1, -1):
        digits[g] = index % n
        index //= n


cdef inline void _advance(Py_ssize_t n, Py_ssize_t m, int64_t[::1] digits) noexcept nogil:
    cdef Py_ssize_t g = m - 1
    while g >= 0:
        if digits[g] + 1 < n:
            digits[g] += 1
            return
        digits[g] = 0
        g -= 1


def fill_utility_table(const int64_t[:, ::1] A, int64_t[:, ::1] out, Py_ssize_t start, Py_ssize_t stop):
    cdef Py_ssize_t n = A.shape[0], m = A.shape[1]
    cdef Py_ssize_t k, g, i, o
    cdef int64_t[::1] digits = np.zeros(m, dtype=np.int64)
    cdef int64_t[::1] u = np.zeros(n, dtype=np.int64)
    if stop <= start:
        return
    with nogil:
        _decode(start, n, m, digits)
        for g in range(m):
            u[digits[g]] += A[digits[g], g]
        for k in range(start, stop):
            for i in range(n):
                out[k, i] = u[i]
            # odometer step with incremental utility update
            g = m - 1
            while g >= 0:
                o = digits[g]
                u[o] -= A[o, g]
                if o + 1 < n:
                    digits[g] = o + 1
                    u[o + 1] += A[o + 1, g]
                    break
                digits[g] = 0
                u[0] += A[0, g]
                g -= 1


def fill_envy_flags(const int64_t[:, ::1] A, uint8_t[::1] ef1, uint8_t[::1] efx, uint8_t[::1] bal,
                    Py_ssize_t start, Py_ssize_t stop):
    cdef Py_ssize_t n = A.shape[0], m = A.shape[1]
    cdef Py_ssize_t k, g, i, o
    cdef int64_t a, own, cmax, cmin
    cdef uint8_t ok1, okx
    cdef int64_t[::1] digits = np.zeros(m, dtype=np.int64)
    cdef int64_t[:, ::1] V = np.zeros((n, n), dtype=np.int64)
    cdef int64_t[:, ::1] MX = np.zeros((n, n), dtype=np.int64)
    cdef int64_t[:, ::1] MN = np.zeros((n, n), dtype=np.int64)
    cdef int64_t[::1] cnt = np.zeros(n, dtype=np.int64)
    if stop <= start:
        return
    with nogil:
        _decode(start, n, m, digits)
        for k in range(start, stop):
            for i in range(n):
                cnt[i] = 0
                for o in range(n):
                    V[i, o] = 0
                    MX[i, o] = 0
                    MN[i, o] = INT64_MAX
            for g in range(m):
                o = digits[g]
                cnt[o] += 1
                for i in range(n):
                    a = A[i, g]
                    V[i, o] += a
                    if a > MX[i, o]:
                        MX[i, o] = a
                    if a < MN[i, o]:
                        MN[i, o] = a
            ok1 = 1
            okx = 1
            for i in range(n):
                own = V[i, i]
                for o in range(n):
                    if o == i or cnt[o] == 0:
                        continue
                    if own < V[i, o] - MX[i, o]:
                        ok1 = 0
                    if own < V[i, o] - MN[i, o]:
                        okx = 0
            ef1[k] = ok1
            efx[k] = okx
            cmax = cnt[0]
            cmin = cnt[0]
            for o in range(1, n):
                if cnt[o] > cmax:
                    cmax = cnt[o]
                if cnt[o] < cmin:
                    cmin = cnt[o]
            bal[k] = 1 if cmax - cmin <= 1 else 0
            _advance(n, m, digits)


def pareto_mask_sorted(const int64_t[:, ::1] U, const int64_t[::1] order, const int64_t[::1] sums):
    cdef Py_ssize_t K = U.shape[0], n = U.shape[1]
    cdef Py_ssize_t t, r, f = 0, q, i
    cdef bint dominated, geq
    mask_arr = np.zeros(K, dtype=np.uint8)
    cdef uint8_t[::1] mask = mask_arr
    cdef int64_t[::1] front = np.zeros(K, dtype=np.int64)
    with nogil:
        for t in range(K):
            r = order[t]
            dominated = False
            for q in range(f):
                if sums[front[q]] <= sums[r]:
                    continue
                geq = True
                for i in range(n):
                    if U[front[q], i] < U[r, i]:
                        geq = False
                        break
                if geq:
                    dominated = True
                    break
            if not dominated:
                mask[r] = 1
                front[f] = r
                f += 1
    return mask_arr.astype(bool)

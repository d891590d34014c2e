# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled versions of the per-generation kernels.

Bit-identical with ``_fallback``: all randomness comes in as arguments and
sort ties are broken by row index (equivalent to numpy's stable argsort).
"""

import numpy as np

cimport numpy as cnp
from libc.stdlib cimport free, malloc

cnp.import_array()


def evaluate_configs(const cnp.float64_t[::1] table, cnp.int64_t[:, ::1] configs):
    cdef Py_ssize_t n = configs.shape[0]
    cdef Py_ssize_t m = configs.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef double acc
    cdef Py_ssize_t i, j
    with nogil:
        for i in range(n):
            acc = 0.0
            for j in range(m):
                acc += table[configs[i, j]]
            (<double*> cnp.PyArray_DATA(<cnp.ndarray> out))[i] = acc
    return out


def bb_counts(cnp.int64_t[:, ::1] configs, long bb_index):
    cdef Py_ssize_t n = configs.shape[0]
    cdef Py_ssize_t m = configs.shape[1]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out = np.zeros(m, dtype=np.int64)
    cdef cnp.int64_t[::1] ov = out
    cdef Py_ssize_t i, j
    with nogil:
        for i in range(n):
            for j in range(m):
                if configs[i, j] == bb_index:
                    ov[j] += 1
    return out


def tournament_pass(cnp.float64_t[::1] fitness, cnp.int64_t[::1] perm,
                    cnp.float64_t[::1] tie):
    cdef Py_ssize_t pairs = perm.shape[0] // 2
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out = np.empty(pairs, dtype=np.int64)
    cdef cnp.int64_t[::1] ov = out
    cdef Py_ssize_t j
    cdef long a, b
    cdef double fa, fb
    with nogil:
        for j in range(pairs):
            a = perm[2 * j]
            b = perm[2 * j + 1]
            fa = fitness[a]
            fb = fitness[b]
            if fa > fb:
                ov[j] = a
            elif fb > fa:
                ov[j] = b
            else:
                ov[j] = a if tie[j] < 0.5 else b
    return out


def binomial_small_cdf(cnp.float64_t[:, ::1] cdf, cnp.int64_t[::1] spans,
                       cnp.float64_t[::1] u):
    cdef Py_ssize_t count = spans.shape[0]
    cdef Py_ssize_t width = cdf.shape[1]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out = np.empty(count, dtype=np.int64)
    cdef cnp.int64_t[::1] ov = out
    cdef Py_ssize_t i, lo, hi, mid
    cdef double ui
    cdef const double* row
    with nogil:
        for i in range(count):
            row = &cdf[spans[i], 0]
            ui = u[i]
            # first index with row[index] > ui; matches counting row <= ui
            lo = 0
            hi = width
            while lo < hi:
                mid = (lo + hi) // 2
                if row[mid] <= ui:
                    lo = mid + 1
                else:
                    hi = mid
            ov[i] = lo
    return out


cdef inline Py_ssize_t _cdf_sample(const double* row, Py_ssize_t v,
                                   double ui) noexcept nogil:
    # count of row entries <= ui, scanning outward from the distribution
    # mode (rows are monotone; the answer is almost always near the mode)
    cdef Py_ssize_t j = v // 2
    if row[j] <= ui:
        j += 1
        while j <= v and row[j] <= ui:
            j += 1
        return j
    while j > 0 and row[j - 1] > ui:
        j -= 1
    return j


def walk_round(cnp.int64_t[::1] x, Py_ssize_t count, long n,
               cnp.float64_t[:, ::1] cdf, bint mirrored,
               cnp.float64_t[::1] u):
    cdef Py_ssize_t i, write = 0
    cdef long succeeded = 0
    cdef long xi, span, steps
    with nogil:
        for i in range(count):
            xi = x[i]
            span = xi if xi <= n - xi else n - xi
            steps = _cdf_sample(&cdf[span, 0], span, u[i])
            if mirrored:
                steps = span - steps
            xi = xi + 2 * steps - span
            if xi == n:
                succeeded += 1
            elif xi != 0:
                x[write] = xi
                write += 1
    return write, succeeded


def shuffle_columns(cnp.int64_t[:, ::1] configs, cnp.uint32_t[:, ::1] keys):
    # stable LSD radix sort of each column's keys (4 byte passes); the
    # stability makes ties resolve by row index, matching the fallback's
    # stable argsort
    cdef Py_ssize_t n = configs.shape[0]
    cdef Py_ssize_t m = configs.shape[1]
    cdef cnp.ndarray[cnp.int64_t, ndim=2] out = np.empty((n, m), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] ov = out
    cdef cnp.uint32_t* key_a
    cdef cnp.uint32_t* key_b
    cdef cnp.uint32_t* kt
    cdef long* idx_a
    cdef long* idx_b
    cdef long* it
    cdef long hist[256]
    cdef long total, cnt
    cdef Py_ssize_t i, j, b, shift
    key_a = <cnp.uint32_t*> malloc(2 * n * sizeof(cnp.uint32_t))
    idx_a = <long*> malloc(2 * n * sizeof(long))
    if key_a == NULL or idx_a == NULL:
        free(key_a)
        free(idx_a)
        raise MemoryError()
    key_b = key_a + n
    idx_b = idx_a + n
    with nogil:
        for j in range(m):
            for i in range(n):
                key_a[i] = keys[i, j]
                idx_a[i] = i
            for b in range(4):
                shift = 8 * b
                for i in range(256):
                    hist[i] = 0
                for i in range(n):
                    hist[(key_a[i] >> shift) & 0xFF] += 1
                total = 0
                for i in range(256):
                    cnt = hist[i]
                    hist[i] = total
                    total += cnt
                for i in range(n):
                    cnt = hist[(key_a[i] >> shift) & 0xFF]
                    hist[(key_a[i] >> shift) & 0xFF] = cnt + 1
                    key_b[cnt] = key_a[i]
                    idx_b[cnt] = idx_a[i]
                kt = key_a; key_a = key_b; key_b = kt
                it = idx_a; idx_a = idx_b; idx_b = it
            for i in range(n):
                ov[i, j] = configs[idx_a[i], j]
    free(key_a if key_a < key_b else key_b)
    free(idx_a if idx_a < idx_b else idx_b)
    return out

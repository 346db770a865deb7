# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the integer kernels in ``_purecore``.

Same contracts: exact int64 arithmetic, caller-checked ranges.
"""

from libc.stdint cimport int64_t

import numpy as np

BACKEND_NAME = "compiled"

cdef extern from *:
    """
    static inline int wn_popcll(unsigned long long x) { return __builtin_popcountll(x); }
    static inline long long wn_llabs(long long x) { return x < 0 ? -x : x; }
    """
    int wn_popcll(unsigned long long) nogil
    long long wn_llabs(long long) nogil


cpdef void fwht_i64(int64_t[::1] a):
    """In-place Walsh-Hadamard butterfly on an int64 vector (length 2^k)."""
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t h = 1, i, j
    cdef int64_t x, y
    while h < n:
        i = 0
        while i < n:
            for j in range(i, i + h):
                x = a[j]
                y = a[j + h]
                a[j] = x + y
                a[j + h] = x - y
            i += 2 * h
        h <<= 1


def fwht_obj(list a):
    """Walsh-Hadamard butterfly on arbitrary-precision Python ints."""
    cdef Py_ssize_t n = len(a)
    cdef Py_ssize_t h = 1, i, j
    cdef object x, y
    while h < n:
        i = 0
        while i < n:
            for j in range(i, i + h):
                x = a[j]
                y = a[j + h]
                a[j] = x + y
                a[j + h] = x - y
            i += 2 * h
        h <<= 1
    return a


def walsh_row(m, int N, rev_arr):
    """Cell values (+-1) of the Walsh-Paley function w_m at resolution N."""
    cdef Py_ssize_t size = 1 << N
    out_arr = np.empty(size, dtype=np.int64)
    cdef int64_t[::1] out = out_arr
    cdef const int64_t[::1] rev = rev_arr
    cdef int64_t mm = m
    cdef Py_ssize_t c
    for c in range(size):
        out[c] = 1 - 2 * (wn_popcll(<unsigned long long> (mm & rev[c])) & 1)
    return out_arr


def fejer_sweep(int N, int nmax, rev_arr):
    """See ``_purecore.fejer_sweep``."""
    cdef Py_ssize_t size = 1 << N
    sup_arr = np.zeros(size, dtype=np.int64)
    l1_arr = np.empty(nmax, dtype=np.int64)
    D_arr = np.zeros(size, dtype=np.int64)
    S_arr = np.zeros(size, dtype=np.int64)
    cdef int64_t[::1] sup = sup_arr
    cdef int64_t[::1] l1 = l1_arr
    cdef int64_t[::1] D = D_arr
    cdef int64_t[::1] S = S_arr
    cdef const int64_t[::1] rev = rev_arr
    cdef Py_ssize_t c
    cdef int n
    cdef int64_t k, tot, v
    for n in range(1, nmax + 1):
        k = n - 1
        tot = 0
        for c in range(size):
            D[c] += 1 - 2 * (wn_popcll(<unsigned long long> (k & rev[c])) & 1)
            S[c] += D[c]
            v = wn_llabs(S[c])
            tot += v
            if v > sup[c]:
                sup[c] = v
        l1[n - 1] = tot
    return sup_arr, l1_arr


def norlund_max_sweep(coeff_arr, qs_arr, ns_arr, int N, rev_arr):
    """See ``_purecore.norlund_max_sweep``."""
    cdef Py_ssize_t size = 1 << N
    num_arr = np.zeros(size, dtype=np.int64)
    den_arr = np.ones(size, dtype=np.int64)
    buf_arr = np.empty(size, dtype=np.int64)
    cdef int64_t[::1] num = num_arr
    cdef int64_t[::1] den = den_arr
    cdef int64_t[::1] buf = buf_arr
    cdef const int64_t[::1] coeff = coeff_arr
    cdef const int64_t[::1] qs = qs_arr
    cdef const int64_t[::1] ns = ns_arr
    cdef const int64_t[::1] rev = rev_arr
    cdef Py_ssize_t M = coeff.shape[0]
    cdef Py_ssize_t i, c, m, t
    cdef int64_t n, qn, v
    for t in range(ns.shape[0]):
        n = ns[t]
        m = min(<Py_ssize_t> n, M)
        for i in range(m):
            buf[i] = coeff[i] * qs[n - i]
        for i in range(m, size):
            buf[i] = 0
        fwht_i64(buf)
        qn = qs[n]
        for c in range(size):
            v = wn_llabs(buf[rev[c]])
            if v * den[c] > num[c] * qn:
                num[c] = v
                den[c] = qn
    return num_arr, den_arr

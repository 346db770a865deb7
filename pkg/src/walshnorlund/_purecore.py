"""Pure-Python (numpy) implementations of the hot integer kernels.

Every function here has a compiled twin in ``_speedups``; the active set is
chosen in ``_core``.  All arithmetic is integer and exact: callers scale
rationals to a common denominator and check int64 range before dispatching
(see ``_core.I64_SAFE``), otherwise they stay on the Python-int object path.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "pure"


def fwht_i64(a: np.ndarray) -> None:
    """In-place Walsh-Hadamard butterfly on an int64 vector (length 2^k)."""
    n = a.shape[0]
    h = 1
    while h < n:
        b = a.reshape(-1, 2, h)
        x = b[:, 0, :].copy()
        b[:, 0, :] = x + b[:, 1, :]
        b[:, 1, :] = x - b[:, 1, :]
        h <<= 1


def fwht_obj(a: list) -> list:
    """Walsh-Hadamard butterfly on arbitrary-precision Python ints.

    Mutates and returns the argument, like the compiled twin.
    """
    n = len(a)
    arr = np.empty(n, dtype=object)
    arr[:] = a
    h = 1
    while h < n:
        b = arr.reshape(-1, 2, h)
        x = b[:, 0, :].copy()
        b[:, 0, :] = x + b[:, 1, :]
        b[:, 1, :] = x - b[:, 1, :]
        h <<= 1
    a[:] = arr.tolist()
    return a


def walsh_row(m: int, N: int, rev: np.ndarray) -> np.ndarray:
    """Cell values (+-1) of the Walsh-Paley function w_m at resolution N."""
    masked = np.bitwise_and(np.int64(m), rev)
    parity = np.bitwise_count(masked.view(np.uint64)).astype(np.int64) & 1
    return 1 - 2 * parity


def fejer_sweep(N: int, nmax: int, rev: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Accumulate D_n and S_n = sum_{k<=n} D_k for n = 1..nmax.

    Returns (sup, l1) with sup[c] = max_n |S_n(c)| (so sup is the cell array
    of sup_n n|K_n|) and l1[n-1] = sum_c |S_n(c)| (so ||K_n||_1 =
    l1[n-1] / (n 2^N)).  Integer-exact; values stay far below 2^63.
    """
    size = 1 << N
    D = np.zeros(size, dtype=np.int64)
    S = np.zeros(size, dtype=np.int64)
    sup = np.zeros(size, dtype=np.int64)
    l1 = np.empty(nmax, dtype=np.int64)
    for n in range(1, nmax + 1):
        D += walsh_row(n - 1, N, rev)
        S += D
        a = np.abs(S)
        l1[n - 1] = int(a.sum())
        np.maximum(sup, a, out=sup)
    return sup, l1


def norlund_max_sweep(
    coeff: np.ndarray, qs: np.ndarray, ns: np.ndarray, N: int, rev: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Pointwise max over n in `ns` of |t_n|, where t_n has Walsh coefficients
    coeff[i] * qs[n-i] / qs[n] for i < n (zero beyond).

    coeff are numerators over a caller-held common denominator, qs are scaled
    prefix sums (qs[0] = 0).  Returns per-cell (num, den) with the max equal
    to num/den relative to the caller's denominator.  Comparisons are exact
    cross-multiplications; the caller guarantees they fit in int64.
    """
    size = 1 << N
    num = np.zeros(size, dtype=np.int64)
    den = np.ones(size, dtype=np.int64)
    buf = np.empty(size, dtype=np.int64)
    M = coeff.shape[0]
    for n in ns:
        n = int(n)
        m = min(n, M)
        buf[:m] = coeff[:m] * qs[n - m + 1 : n + 1][::-1]
        buf[m:] = 0
        fwht_i64(buf)
        vals = np.abs(buf[rev])
        better = vals * den > num * qs[n]
        num[better] = vals[better]
        den[better] = qs[n]
    return num, den

"""Partial sums, convolution, Norlund and Fejer means, and maximal means
over finite index sets.

The Norlund mean of order n has the exact Walsh-multiplier form

    t_n(f) = sum_{i<n} fhat(i) (Q_{n-i}/Q_n) w_i,

obtained from the weighted partial-sum average by switching the summation
order; `norlund_mean` nevertheless computes the literal weighted average in
the time domain AND a kernel convolution, and insists they agree exactly,
while the sweeps behind `maximal_mean` use the multiplier form.
"""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath
import numpy as np

from . import _core
from .kernels import norlund_kernel
from .scalars import RATIONAL, REAL, to_real, workdps
from .stepfunc import StepFunction, synthesize
from .weights import WeightSequence


class DualPathMismatch(RuntimeError):
    """The weighted-average and convolution routes disagree: an internal
    invariant breach, never a data error."""


def partial_sum(f: StepFunction, M: int) -> StepFunction:
    """S_M(f) = sum_{i<M} fhat(i) w_i, exact truncation in coefficient space."""
    if not 0 <= M <= f.size:
        raise ValueError(f"partial-sum order must lie in [0, 2^{f.resolution}]")
    if f.backend == REAL:
        coeffs = list(f.walsh_coefficients()[:M])
        with workdps():
            coeffs += [mpmath.mpf(0)] * (f.size - M)
        return StepFunction.from_coefficients(coeffs)
    nums, den = f.coefficient_ints()
    return synthesize(nums[:M], den, f.resolution)


def convolve(f: StepFunction, g: StepFunction) -> StepFunction:
    """Dyadic convolution (f*g)(x) = integral of f(x (+) t) g(t) dt.

    Computed exactly through the transform (the coefficients multiply);
    agrees cell-by-cell with the definition 2^-N sum_j f[c xor j] g[j].
    """
    N = max(f.resolution, g.resolution)
    a, b = f.refine(N), g.refine(N)
    if a.backend == REAL or b.backend == REAL:
        ca = a.walsh_coefficients()
        cb = b.walsh_coefficients()
        with workdps():
            prod = [to_real(x) * to_real(y) for x, y in zip(ca, cb)]
        return StepFunction.from_coefficients(prod)
    na, da = a.coefficient_ints()
    nb, db = b.coefficient_ints()
    return synthesize([x * y for x, y in zip(na, nb)], da * db, N)


def convolve_direct(f: StepFunction, g: StepFunction) -> StepFunction:
    """The definitional O(4^N) xor-sum; the oracle twin of `convolve`."""
    N = max(f.resolution, g.resolution)
    a, b = f.refine(N), g.refine(N)
    size = a.size
    if a.backend == REAL or b.backend == REAL:
        a, b = a.to_real(), b.to_real()
        with workdps():
            vals = [mpmath.fsum(a.values[c ^ j] * b.values[j] for j in range(size)) / size
                    for c in range(size)]
        return StepFunction(N, reals=vals)
    na, da = a.scaled_ints()
    nb, db = b.scaled_ints()
    nums = [sum(na[c ^ j] * nb[j] for j in range(size)) for c in range(size)]
    return StepFunction(N, nums=nums, den=da * db * size)


def _weighted_average_exact(q: WeightSequence, n: int, f: StepFunction) -> StepFunction:
    """(1/Q_n) sum_k q_{n-k} S_k(f), accumulated literally in the time domain."""
    N = f.resolution
    size = f.size
    cnums, cden = f.coefficient_ints()
    qs, _qden = q.scaled_prefix_ints(n)
    qw = [qs[m + 1] - qs[m] for m in range(n)]  # scaled q_0..q_{n-1}
    S = [0] * size
    acc = [0] * size
    for k in range(1, n + 1):
        coef = cnums[k - 1]
        if coef:
            row = _core.walsh_row(k - 1, N)
            for c in range(size):
                S[c] += coef * int(row[c])
        w = qw[n - k]
        if w:
            for c in range(size):
                acc[c] += w * S[c]
    return StepFunction(N, nums=acc, den=cden * qs[n])


def _weighted_average_real(q: WeightSequence, n: int, f: StepFunction) -> StepFunction:
    N = f.resolution
    size = f.size
    coeffs = f.walsh_coefficients()
    with workdps():
        S = [mpmath.mpf(0)] * size
        acc = [mpmath.mpf(0)] * size
        for k in range(1, n + 1):
            coef = coeffs[k - 1]
            row = _core.walsh_row(k - 1, N)
            for c in range(size):
                S[c] = S[c] + coef * int(row[c])
            w = to_real(q.q(n - k))
            for c in range(size):
                acc[c] = acc[c] + w * S[c]
        qn = q.Q_real(n)
        return StepFunction(N, reals=[v / qn for v in acc])


def norlund_mean(q: WeightSequence, n: int, f: StepFunction) -> StepFunction:
    """t_n(f), computed as the weighted partial-sum average and re-derived by
    convolution with the order-n kernel; the two must agree (exactly on the
    rational backend) or DualPathMismatch is raised."""
    if n < 1:
        raise ValueError("mean order must be at least 1")
    if n > f.size:
        raise ValueError("mean order exceeds the representable degree")
    exact = f.backend == RATIONAL and q.exact
    if exact:
        direct = _weighted_average_exact(q, n, f)
    else:
        direct = _weighted_average_real(q, n, f.to_real() if f.backend == RATIONAL else f)
    viaconv = convolve(f, norlund_kernel(q, n, f.resolution))
    if exact:
        if direct != viaconv:
            raise DualPathMismatch(
                f"norlund mean order {n}: weighted average and convolution differ")
    else:
        with workdps():
            err = max(abs(x - y) for x, y in zip(direct.values, viaconv.values))
            scale = max(1, direct.sup_abs())
            tol = mpmath.mpf(10) ** (-(mpmath.mp.dps - 10))
            if err > tol * scale:
                raise DualPathMismatch(
                    f"norlund mean order {n}: routes differ by {err}")
    return direct


def fejer_mean(n: int, f: StepFunction) -> StepFunction:
    """sigma_n(f) = (1/n) sum_{k<=n} S_k(f): the constant-weight mean."""
    from .weights import make_family

    return norlund_mean(make_family("fejer"), n, f)


def multiplier_mean(q: WeightSequence, n: int, f: StepFunction) -> StepFunction:
    """t_n(f) through the exact multiplier form; single fast route (no dual
    check; equals `norlund_mean` exactly, see tests)."""
    if n < 1 or n > f.size:
        raise ValueError("mean order out of range")
    if f.backend == RATIONAL and q.exact:
        cnums, cden = f.coefficient_ints()
        qs, _ = q.scaled_prefix_ints(n)
        scaled = [cnums[i] * qs[n - i] for i in range(min(n, len(cnums)))]
        return synthesize(scaled, cden * qs[n], f.resolution)
    fr = f.to_real() if f.backend == RATIONAL else f
    coeffs = fr.walsh_coefficients()
    with workdps():
        qn = q.Q_real(n)
        scaled = [coeffs[i] * q.Q_real(n - i) / qn for i in range(min(n, len(coeffs)))]
        return StepFunction.from_coefficients(scaled, fr.resolution)


def _max_sweep_obj(cnums, qs, ns, N):
    """Python-int twin of the compiled max sweep (no range limits)."""
    size = 1 << N
    rev = _core.bitrev_table(N)
    num = [0] * size
    den = [1] * size
    M = len(cnums)
    for n in ns:
        m = min(n, M)
        buf = [cnums[i] * qs[n - i] for i in range(m)] + [0] * (size - m)
        u = _core.fwht_obj(buf)
        qn = qs[n]
        for c in range(size):
            v = abs(u[rev[c]])
            if v * den[c] > num[c] * qn:
                num[c] = v
                den[c] = qn
    return num, den


def maximal_mean(q: WeightSequence, indices, f: StepFunction) -> StepFunction:
    """Pointwise maximum of |t_n(f)| over a finite index set.

    Rational inputs run an exact scaled-integer sweep (compiled when every
    cross-comparison provably fits in int64, Python ints otherwise).
    """
    ns = sorted(set(int(n) for n in indices))
    if not ns:
        raise ValueError("index set must be non-empty")
    if ns[0] < 1:
        raise ValueError("mean orders must be positive")
    if ns[-1] > f.size:
        raise ValueError("index set exceeds the representable degree")
    N = f.resolution
    if f.backend == RATIONAL and q.exact:
        cnums, cden = f.coefficient_ints()
        qs, _ = q.scaled_prefix_ints(ns[-1])
        s1 = sum(abs(v) for v in cnums)
        qmax = max(qs)
        if s1 and s1 * qmax * qmax < _core.I64_SAFE:
            num, den = _core.norlund_max_sweep(
                np.array(cnums, dtype=np.int64), np.array(qs, dtype=np.int64),
                np.array(ns, dtype=np.int64), N)
            pairs = zip((int(v) for v in num), (int(d) for d in den))
        else:
            num, den = _max_sweep_obj(cnums, qs, ns, N)
            pairs = zip(num, den)
        return StepFunction.from_values(
            [Fraction(v, d * cden) for v, d in pairs], N)
    acc = None
    for n in ns:
        g = abs(multiplier_mean(q, n, f))
        acc = g if acc is None else acc.max_with(g)
    return acc

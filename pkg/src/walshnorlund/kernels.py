"""Dirichlet, Fejer and Norlund kernels as exact step functions, the
two-stage kernel decomposition, and the sup-kernel sweep.

Kernel synthesis runs in coefficient space:

    D_n   = sum_{i<n} w_i
    K_n   = sum_{i<n} ((n-i)/n) w_i
    F_n   = sum_{i<n} (Q_{n-i}/Q_n) w_i

so a kernel costs one integer butterfly instead of n pointwise kernel sums;
the definitional sums remain as oracles in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from . import _core
from .dyadic import BinaryIndex
from .scalars import Scalar, workdps
from .stepfunc import StepFunction, _fwht_ints, synthesize
from .weights import WeightSequence


def dirichlet(n: int, resolution: int) -> StepFunction:
    """D_n = w_0 + ... + w_{n-1}; D_n(0) = n and its integral is 1 (n >= 1)."""
    if n < 0:
        raise ValueError("kernel order must be non-negative")
    if n > (1 << resolution):
        raise ValueError("resolution too small: need n <= 2^resolution")
    return synthesize([1] * n, 1, resolution)


def fejer(n: int, resolution: int) -> StepFunction:
    """K_n = (D_1 + ... + D_n)/n; integral 1."""
    if n < 1:
        raise ValueError("kernel order must be positive")
    if n > (1 << resolution):
        raise ValueError("resolution too small: need n <= 2^resolution")
    return synthesize([n - i for i in range(n)], n, resolution)


def norlund_kernel(q: WeightSequence, n: int, resolution: int) -> StepFunction:
    """F_n = (1/Q_n) sum_{k<=n} q_{n-k} D_k; exact for exact weight families."""
    if n < 1:
        raise ValueError("kernel order must be positive")
    if n > (1 << resolution):
        raise ValueError("resolution too small: need n <= 2^resolution")
    if q.exact:
        qs, _qden = q.scaled_prefix_ints(n)
        return synthesize([qs[n - i] for i in range(n)], qs[n], resolution)
    with workdps():
        qn = q.Q_real(n)
        coeffs = [q.Q_real(n - i) / qn for i in range(n)]
        return StepFunction.from_coefficients(coeffs, resolution)


def fejer_shift_form(n: int, resolution: int) -> StepFunction:
    """K_{2^n} assembled from shifted Dirichlet kernels:

        (1/2) (2^-n D_{2^n}(x) + sum_{j=0}^n 2^{j-n} D_{2^n}(x (+) e_j)),

    with e_j = 2^(-j-1).  Equals fejer(2^n) exactly; kept as an independent
    construction for cross-checks.
    """
    if n < 0:
        raise ValueError("scale must be non-negative")
    if n > resolution:
        raise ValueError("resolution too small: need n <= resolution")
    size = 1 << resolution
    block = 1 << (resolution - n)  # cells per level-n interval
    nums = [0] * size
    for c in range(block):  # 2^-n D_{2^n} contributes 1/2 on I_n
        nums[c] += 1
    for j in range(n + 1):
        if j >= n:
            lo = 0  # e_j in I_n: the shift fixes I_n
        else:
            lo = (1 << (n - j - 1)) * block  # level-n interval containing e_j
        w = 1 << j
        for c in range(lo, lo + block):
            nums[c] += w
    return StepFunction(resolution, nums=nums, den=2)


@dataclass
class KernelDecomposition:
    """F_n split into its transform-localized part and the Fejer-shaped
    remainder, with the remainder further split by Abel summation:

        whole = part1 + part2,    part2 = part2a + part2b   (exactly).
    """

    index: BinaryIndex
    weights_label: str
    whole: StepFunction
    part1: StepFunction
    part2: StepFunction
    part2a: StepFunction
    part2b: StepFunction

    def closure_residuals(self) -> tuple[StepFunction, StepFunction]:
        return (self.whole - (self.part1 + self.part2),
                self.part2 - (self.part2a + self.part2b))

    def closed(self) -> bool:
        r1, r2 = self.closure_residuals()
        return r1.is_zero() and r2.is_zero()


def _synth_nums(coeffs: list[int], resolution: int) -> list[int]:
    size = 1 << resolution
    vals = list(coeffs) + [0] * (size - len(coeffs))
    tmp = _fwht_ints(vals)
    rev = _core.bitrev_table(resolution)
    return [tmp[rev[c]] for c in range(size)]


def decompose_kernel(q: WeightSequence, n, resolution: int) -> KernelDecomposition:
    """Exact decomposition of F_n along the binary expansion of n.

    With n = 2^{n_1} + ... + 2^{n_r} (n_1 > ... > n_r), tails n^(0) = n,
    n^(i) = n^(i-1) - 2^{n_i}:

        part1 = (w_n/Q_n) sum_j Q_{n^(j-1)} w_{2^{n_j}} D_{2^{n_j}}
        part2 = -(w_n/Q_n) sum_j w_{n^(j-1)} w_{2^{n_j}-1}
                    sum_{k=1}^{2^{n_j}-1} q_{k+n^(j)} D_k

    and part2 splits by Abel summation into the difference-weighted sum of
    k K_k (part2a) plus boundary Fejer terms (part2b).  The Walsh factors
    are sampled on the grid and multiplied pointwise, no symbolic
    simplification; individual terms carry degree up to 2^{|n|+1} - 1, so
    the resolution must satisfy n < 2^resolution.

    Requires an exact (rational) weight family.
    """
    idx = n if isinstance(n, BinaryIndex) else BinaryIndex(n)
    n = idx.n
    if n < 1:
        raise ValueError("decomposition needs n >= 1")
    if n >= (1 << resolution):
        raise ValueError("resolution too small: decomposition factors need n < 2^resolution")
    if not q.exact:
        raise ValueError("decomposition is exact-only; use an exact weight family")
    N = resolution
    size = 1 << N
    qs, qden = q.scaled_prefix_ints(n)
    exps = idx.exponents
    tails = idx.tails
    wn = _core.walsh_row(n, N)

    whole = synthesize([qs[n - i] for i in range(n)], qs[n], N)

    acc1 = [0] * size
    acc2 = [0] * size
    acc2a = [0] * size
    acc2b = [0] * size
    for j, e in enumerate(exps):
        prev = tails[j]      # n^(j-1) in 1-based terms
        c0 = tails[j + 1]    # n^(j)
        # part1: Q_{n^(j-1)} w_{2^e} D_{2^e}; D_{2^e} = 2^e on I_e only
        wrow = _core.walsh_row(1 << e, N)
        factor = qs[prev] * (1 << e)
        for c in range(1 << (N - e)):
            acc1[c] += factor * int(wrow[c])
        K = (1 << e) - 1
        if K == 0:
            continue
        srow = _core.walsh_row(prev, N) * _core.walsh_row(K, N)
        inner = _synth_nums([qs[prev] - qs[c0 + i + 1] for i in range(K)], N)
        qb = qs[prev] - qs[prev - 1]  # scaled q_{n^(j-1)-1}
        if K >= 2:
            inner_a = _synth_nums(
                [(qs[c0 + K] - qs[c0 + i + 1]) - (K - 1 - i) * qb for i in range(K - 1)], N)
        else:
            inner_a = None
        inner_b = _synth_nums([qb * (K - i) for i in range(K)], N)
        for c in range(size):
            s = int(srow[c])
            acc2[c] += s * inner[c]
            acc2b[c] += s * inner_b[c]
            if inner_a is not None:
                acc2a[c] += s * inner_a[c]

    # inner sums are qden-scaled, but so is qs[n] = Q_n qden: the scale cancels
    den_parts = qs[n]
    part1 = StepFunction(N, nums=[int(wn[c]) * acc1[c] for c in range(size)], den=qs[n])
    part2 = StepFunction(N, nums=[-int(wn[c]) * acc2[c] for c in range(size)], den=den_parts)
    part2a = StepFunction(N, nums=[-int(wn[c]) * acc2a[c] for c in range(size)], den=den_parts)
    part2b = StepFunction(N, nums=[-int(wn[c]) * acc2b[c] for c in range(size)], den=den_parts)
    return KernelDecomposition(index=idx, weights_label=q.label, whole=whole,
                               part1=part1, part2=part2, part2a=part2a, part2b=part2b)


def kernel_sup(resolution: int, p) -> tuple[StepFunction, Scalar]:
    """The cell function x -> sup_{1<=n<=2^N} n|K_n(x)| (exact integers,
    accumulated incrementally in O(4^N)) and the integral of its p-th power
    (exact for p = 1, working precision otherwise); 1/2 < p <= 1.
    """
    p = Fraction(p)
    if not Fraction(1, 2) < p <= 1:
        raise ValueError("exponent must lie in (1/2, 1]")
    N = resolution
    sup, _l1 = _core.fejer_sweep(N, 1 << N)
    fn = StepFunction(N, nums=[int(v) for v in sup], den=1)
    if p == 1:
        integral: Scalar = Fraction(int(sup.sum()), 1 << N)
    else:
        with workdps():
            pr = mpmath.mpf(p.numerator) / p.denominator
            integral = mpmath.fsum(mpmath.power(int(v), pr) for v in sup) / (1 << N)
    return fn, integral


def fejer_l1_norms(n_max: int) -> list[Fraction]:
    """Exact ||K_n||_1 for n = 1..n_max, from one incremental sweep."""
    if n_max < 1:
        raise ValueError("need n_max >= 1")
    N = max(1, (n_max - 1).bit_length())
    _sup, l1 = _core.fejer_sweep(N, n_max)
    return [Fraction(int(l1[n - 1]), n << N) for n in range(1, n_max + 1)]

"""L_p / weak-L_1 / dyadic-Hardy quasi-norms and p-atoms.

The Hardy quasi-norm uses the dyadic maximal function
E*(f) = sup_n |S_{2^n} f|; the dyadic partial sums S_{2^n} f are the
conditional expectations (cell averages) at level n, so E* is a pyramid of
exact averages.  Absolute values are applied to the partial sums, which is
what every norm identity in the test suite relies on.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .dyadic import DyadicInterval
from .scalars import (RATIONAL, REAL, Scalar, backend_of, default_dps, nth_root_exact,
                      to_real, workdps)
from .stepfunc import StepFunction


@dataclass(frozen=True)
class NormValue:
    """A computed (quasi-)norm with its backend provenance."""

    kind: str  # "Lp" | "weak-L1" | "Hp" | "Linf"
    p: Fraction | None
    value: Scalar
    backend: str
    dps: int | None = None

    def __float__(self) -> float:
        return float(self.value)


def _power_mean(f: StepFunction, p: Fraction) -> tuple[Scalar, str]:
    """(integral of |f|^p, backend)."""
    if f.backend == REAL:
        with workdps():
            pr = to_real(p)
            total = mpmath.fsum(abs(v) ** pr for v in f.values)
            return total / f.size, REAL
    nums, den = f.scaled_ints()
    if p.denominator == 1:
        k = p.numerator
        total = sum(abs(v) ** k for v in nums)
        return Fraction(total, den**k * f.size), RATIONAL
    with workdps():
        dr = mpmath.mpf(den)
        pr = to_real(p)
        total = mpmath.fsum((mpmath.mpf(abs(v)) / dr) ** pr for v in nums if v)
        return total / f.size, REAL


def lp_quasinorm(f: StepFunction, p) -> NormValue:
    """||f||_p = (integral |f|^p)^(1/p) for 0 < p < oo; p = "inf" gives the
    sup norm.  Exact for p = 1, p = inf, and whenever the integer-p root is
    exact; working-precision otherwise.
    """
    if p in ("inf", "oo", mpmath.inf) or (isinstance(p, float) and p == float("inf")):
        return NormValue("Linf", None, f.sup_abs(), f.backend)
    p = Fraction(p)
    if p <= 0:
        raise ValueError("exponent must be positive")
    mean, backend = _power_mean(f, p)
    if p == 1:
        return NormValue("Lp", p, mean, backend)
    if backend == RATIONAL:
        if p.denominator == 1:
            root = nth_root_exact(mean, p.numerator)
            if root is not None:
                return NormValue("Lp", p, root, RATIONAL)
        elif p.numerator == 1:
            return NormValue("Lp", p, mean**p.denominator, RATIONAL)
    with workdps():
        val = to_real(mean) ** (1 / to_real(p))
        return NormValue("Lp", p, val, REAL, dps=default_dps())


def weak_l1_norm(f: StepFunction) -> NormValue:
    """sup_{t>0} t |{|f| > t}|: attained approaching a value of |f| from
    below, so it equals max over distinct values v of v |{|f| >= v}|."""
    if f.backend == REAL:
        with workdps():
            vals = sorted((abs(v) for v in f.values), reverse=True)
            best = mpmath.mpf(0)
            for count, v in enumerate(vals, start=1):
                best = max(best, v * count / f.size)
        return NormValue("weak-L1", None, best, REAL)
    nums, den = f.scaled_ints()
    absnums = sorted((abs(v) for v in nums), reverse=True)
    best = Fraction(0)
    for count, v in enumerate(absnums, start=1):
        # after sorting, v with multiplicity: measure{|f| >= v/den} = count/size
        best = max(best, Fraction(v * count, den * f.size))
    return NormValue("weak-L1", None, best, RATIONAL)


def dyadic_maximal(f: StepFunction) -> StepFunction:
    """E*(f) = max over 0 <= n <= N of |S_{2^n} f| (cell averages), exact."""
    N = f.resolution
    if f.backend == REAL:
        with workdps():
            levels = [list(f.values)]
            while len(levels[-1]) > 1:
                prev = levels[-1]
                levels.append([(prev[2 * i] + prev[2 * i + 1]) / 2
                               for i in range(len(prev) // 2)])
            out = []
            for c in range(f.size):
                out.append(max(abs(levels[k][c >> k]) for k in range(N + 1)))
            return StepFunction(N, reals=out, promoted=f.promoted)
    nums, den = f.scaled_ints()
    sums = [list(nums)]  # level N cell sums; level N-k entry c sums 2^k cells
    while len(sums[-1]) > 1:
        prev = sums[-1]
        sums.append([prev[2 * i] + prev[2 * i + 1] for i in range(len(prev) // 2)])
    # |average| over the level-(N-k) cell = |sum| * 2^(N-k) / (den 2^N)
    out = []
    for c in range(f.size):
        out.append(max(abs(sums[k][c >> k]) << (N - k) for k in range(N + 1)))
    return StepFunction(N, nums=out, den=den << N, promoted=f.promoted)


def hardy_norm(f: StepFunction, p) -> NormValue:
    """||f||_{H_p} = ||E*(f)||_p.  The dyadic partial sums stabilize at f
    beyond the resolution, so the finite pyramid realizes the full sup."""
    nv = lp_quasinorm(dyadic_maximal(f), p)
    return NormValue("Hp", nv.p, nv.value, nv.backend, nv.dps)


# -- p-atoms -------------------------------------------------------------------


@dataclass(frozen=True)
class PAtom:
    """A p-atom: supported on a dyadic interval I, zero mean, sup bound
    |I|^(-1/p)."""

    p: Fraction
    support: DyadicInterval
    func: StepFunction
    seed: int | None = None

    def validate(self) -> bool:
        check_atom(self.func, self.p, self.support)
        return True


def check_atom(f: StepFunction, p, support: DyadicInterval) -> None:
    """Raise unless f satisfies the three atom axioms exactly.

    The sup bound |I|^(-1/p) = 2^(N/p) is checked exactly for every
    rational p via ||f||_inf^num(p) <= 2^(N den(p)).
    """
    p = Fraction(p)
    if not 0 < p <= 1:
        raise ValueError("atom exponent must lie in (0, 1]")
    if support.complement:
        raise ValueError("atom support must be a plain dyadic interval")
    if f.integrate(support) != 0 or f.integrate() != 0:
        raise ValueError("atom must have zero mean")
    out = f.integrate(DyadicInterval(support.level, support.index, complement=True),
                      absolute=True)
    if out != 0:
        raise ValueError("atom must vanish off its support")
    sup = f.sup_abs()
    if f.backend == RATIONAL:
        ok = Fraction(sup) ** p.numerator <= Fraction(2) ** (support.level * p.denominator)
    else:
        with workdps():
            slack = 1 + mpmath.mpf(10) ** (5 - default_dps())
            ok = sup ** to_real(p) <= mpmath.mpf(2) ** support.level * slack
    if not ok:
        raise ValueError("atom sup-norm bound violated")


def make_p_atom(p, level: int, seed: int, subcells: int = 16) -> PAtom:
    """A reproducible pseudo-random p-atom on I_level = [0, 2^-level).

    Values are drawn on `subcells` equal cells of the support, mean-corrected
    exactly, then rescaled so the sup norm meets the largest power of two
    allowed by the bound 2^(level/p) (the bound itself when level/p is an
    integer).  Deterministic in (p, level, seed, subcells).
    """
    p = Fraction(p)
    if not 0 < p <= 1:
        raise ValueError("atom exponent must lie in (0, 1]")
    if subcells < 2 or subcells & (subcells - 1):
        raise ValueError("subcells must be a power of two >= 2")
    depth = subcells.bit_length() - 1
    rng = random.Random(seed)
    while True:
        draws = [rng.randrange(-256, 257) for _ in range(subcells)]
        if max(draws) != min(draws):
            break
    mean = Fraction(sum(draws), subcells)
    vals = [v - mean for v in draws]
    peak = max(abs(v) for v in vals)
    ratio = Fraction(level, 1) / p
    expo = ratio.numerator // ratio.denominator  # floor(level/p)
    target = Fraction(2) ** expo
    vals = [v * target / peak for v in vals]
    resolution = level + depth
    full = vals + [Fraction(0)] * ((1 << resolution) - subcells)
    func = StepFunction.from_values(full, resolution)
    support = DyadicInterval.base(level)
    atom = PAtom(p=p, support=support, func=func, seed=seed)
    check_atom(func, p, support)
    return atom


def haar_atom(p, level: int) -> PAtom:
    """The canonical two-valued atom: +2^(level/p) on the left half of the
    support, the negative on the right half (exact when level/p is integer,
    the floor power of two otherwise)."""
    p = Fraction(p)
    ratio = Fraction(level, 1) / p
    expo = ratio.numerator // ratio.denominator
    target = Fraction(2) ** expo
    resolution = level + 1
    vals = [target, -target] + [Fraction(0)] * ((1 << resolution) - 2)
    func = StepFunction.from_values(vals, resolution)
    support = DyadicInterval.base(level)
    atom = PAtom(p=p, support=support, func=func, seed=None)
    check_atom(func, p, support)
    return atom

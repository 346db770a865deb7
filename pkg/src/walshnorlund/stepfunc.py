"""Exact piecewise-constant functions on [0,1) at dyadic resolution N.

A rational-backend StepFunction stores one Python-int numerator per cell
over a single common denominator, so sweeps and transforms run on integers
with no per-operation gcd; Fractions are materialized on demand.  The real
backend stores mpmath values at the working precision.

Any Walsh polynomial of degree < 2^N is exactly representable at resolution
N; refining duplicates cell values and changes nothing else.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import mpmath
import numpy as np

from . import _core
from .dyadic import DyadicInterval, DyadicPoint
from .scalars import RATIONAL, REAL, Scalar, format_scalar, parse_exact, to_real, workdps

_FORMAT_TAG = "walshnorlund-stepfunction 1"


def _fwht_ints(vals: Sequence[int]) -> list[int]:
    """Exact FWHT of an integer vector; int64 fast path when it cannot overflow."""
    n = len(vals)
    mx = max((abs(v) for v in vals), default=0)
    if mx and mx * n < _core.I64_SAFE:
        arr = np.array(vals, dtype=np.int64)
        _core.fwht_i64(arr)
        return arr.tolist()
    return _core.fwht_obj(list(vals))


def _fwht_mpf(vals: list) -> list:
    n = len(vals)
    a = list(vals)
    h = 1
    while h < n:
        for start in range(0, n, 2 * h):
            for j in range(start, start + h):
                x, y = a[j], a[j + h]
                a[j] = x + y
                a[j + h] = x - y
        h <<= 1
    return a


class StepFunction:
    """A function constant on the 2^N half-open cells [c/2^N, (c+1)/2^N)."""

    def __init__(self, resolution: int, nums: Sequence[int] | None = None, den: int = 1,
                 reals: Sequence | None = None, promoted: bool = False):
        if resolution < 0:
            raise ValueError("resolution must be non-negative")
        size = 1 << resolution
        self.resolution = resolution
        self.promoted = promoted
        if reals is not None:
            if len(reals) != size:
                raise ValueError("value count must be 2^resolution")
            self.backend = REAL
            self._reals = tuple(reals)
            self._nums = None
            self._den = None
            return
        if nums is None or len(nums) != size:
            raise ValueError("value count must be 2^resolution")
        if den <= 0:
            raise ValueError("denominator must be positive")
        g = den
        for v in nums:
            g = math.gcd(g, v)
            if g == 1:
                break
        if g > 1:
            nums = [v // g for v in nums]
            den //= g
        self.backend = RATIONAL
        self._nums = list(nums)
        self._den = den
        self._reals = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_values(cls, values: Sequence, resolution: int | None = None) -> "StepFunction":
        """Build from per-cell values (Fractions/ints, or mpf for the real backend)."""
        if resolution is None:
            size = len(values)
            if size & (size - 1) or size == 0:
                raise ValueError("value count must be a power of two")
            resolution = size.bit_length() - 1
        if any(isinstance(v, mpmath.mpf) for v in values):
            return cls(resolution, reals=[to_real(v) for v in values])
        fracs = [Fraction(v) for v in values]
        den = 1
        for f in fracs:
            den = den * f.denominator // math.gcd(den, f.denominator)
        nums = [f.numerator * (den // f.denominator) for f in fracs]
        return cls(resolution, nums=nums, den=den)

    @classmethod
    def constant(cls, value, resolution: int) -> "StepFunction":
        size = 1 << resolution
        if isinstance(value, mpmath.mpf):
            return cls(resolution, reals=[value] * size)
        fr = Fraction(value)
        return cls(resolution, nums=[fr.numerator] * size, den=fr.denominator)

    @classmethod
    def indicator(cls, interval: DyadicInterval, resolution: int, scale=1) -> "StepFunction":
        """scale * 1_interval, exact."""
        if interval.level > resolution:
            raise ValueError("resolution too small for the interval")
        fr = Fraction(scale)
        nums = [0] * (1 << resolution)
        lo, hi = interval.cell_range(resolution)
        inside, outside = (0, fr.numerator) if interval.complement else (fr.numerator, 0)
        for c in range(len(nums)):
            nums[c] = inside if lo <= c < hi else outside
        return cls(resolution, nums=nums, den=fr.denominator)

    @classmethod
    def from_coefficients(cls, coeffs: Sequence, resolution: int | None = None) -> "StepFunction":
        """Walsh synthesis: f = sum_i c_i w_i.  Inverse of walsh_coefficients.

        Without an explicit resolution the count must be a power of two;
        with one, the coefficients are zero-padded to 2^resolution.
        """
        size = len(coeffs)
        if resolution is not None:
            if 1 << resolution < size:
                raise ValueError("resolution too small for the coefficient count")
            coeffs = list(coeffs) + [0] * ((1 << resolution) - size)
            return cls.from_coefficients(coeffs)
        if size == 0 or size & (size - 1):
            raise ValueError("coefficient count must be a power of two")
        N = size.bit_length() - 1
        if any(isinstance(v, mpmath.mpf) for v in coeffs):
            with workdps():
                tmp = _fwht_mpf([to_real(v) for v in coeffs])
                rev = _core.bitrev_table(N)
                return cls(N, reals=[tmp[rev[c]] for c in range(size)])
        fracs = [Fraction(v) for v in coeffs]
        den = 1
        for f in fracs:
            den = den * f.denominator // math.gcd(den, f.denominator)
        nums = [f.numerator * (den // f.denominator) for f in fracs]
        return synthesize(nums, den, N)

    # -- representation ----------------------------------------------------

    @property
    def size(self) -> int:
        return 1 << self.resolution

    @cached_property
    def values(self) -> tuple:
        """Per-cell values as Fractions (rational backend) or mpf (real)."""
        if self.backend == REAL:
            return self._reals
        den = self._den
        return tuple(Fraction(n, den) for n in self._nums)

    def scaled_ints(self) -> tuple[list[int], int]:
        """(numerators, common denominator); rational backend only."""
        if self.backend != RATIONAL:
            raise ValueError("scaled integers exist only on the rational backend")
        return list(self._nums), self._den

    def value_at(self, x) -> Scalar:
        if isinstance(x, DyadicPoint):
            c = x.cell(self.resolution)
        else:
            fr = Fraction(x)
            if not 0 <= fr < 1:
                raise ValueError("point must lie in [0,1)")
            c = (fr.numerator << self.resolution) // fr.denominator
        if self.backend == REAL:
            return self._reals[c]
        return Fraction(self._nums[c], self._den)

    def __repr__(self) -> str:
        return f"StepFunction(N={self.resolution}, backend={self.backend})"

    # -- resolution handling -------------------------------------------------

    def refine(self, resolution: int) -> "StepFunction":
        """Same function on the finer grid; exact."""
        if resolution < self.resolution:
            raise ValueError("cannot coarsen a step function")
        if resolution == self.resolution:
            return self
        k = 1 << (resolution - self.resolution)
        if self.backend == REAL:
            return StepFunction(resolution,
                                reals=[v for v in self._reals for _ in range(k)],
                                promoted=self.promoted)
        return StepFunction(resolution, nums=[v for v in self._nums for _ in range(k)],
                            den=self._den, promoted=self.promoted)

    @staticmethod
    def _common(a: "StepFunction", b: "StepFunction"):
        N = max(a.resolution, b.resolution)
        a, b = a.refine(N), b.refine(N)
        if a.backend != b.backend:
            a, b = a.to_real(), b.to_real()
            a.promoted = b.promoted = True
        return a, b

    def to_real(self, dps: int | None = None) -> "StepFunction":
        if self.backend == REAL:
            return self
        with workdps(dps):
            den = self._den
            reals = [mpmath.mpf(n) / den for n in self._nums]
        return StepFunction(self.resolution, reals=reals, promoted=True)

    # -- pointwise algebra ---------------------------------------------------

    def __add__(self, other: "StepFunction") -> "StepFunction":
        a, b = self._common(self, other)
        promoted = a.promoted or b.promoted
        if a.backend == REAL:
            with workdps():
                return StepFunction(a.resolution,
                                    reals=[x + y for x, y in zip(a._reals, b._reals)],
                                    promoted=promoted)
        da, db = a._den, b._den
        g = math.gcd(da, db)
        ma, mb = db // g, da // g
        nums = [x * ma + y * mb for x, y in zip(a._nums, b._nums)]
        return StepFunction(a.resolution, nums=nums, den=da * ma, promoted=promoted)

    def __neg__(self) -> "StepFunction":
        if self.backend == REAL:
            return StepFunction(self.resolution, reals=[-v for v in self._reals],
                                promoted=self.promoted)
        return StepFunction(self.resolution, nums=[-v for v in self._nums], den=self._den,
                            promoted=self.promoted)

    def __sub__(self, other: "StepFunction") -> "StepFunction":
        return self + (-other)

    def scale(self, c) -> "StepFunction":
        """Multiply by a scalar, exactly on the rational backend."""
        if self.backend == REAL or isinstance(c, mpmath.mpf):
            f = self.to_real() if self.backend == RATIONAL else self
            with workdps():
                cc = to_real(c)
                return StepFunction(f.resolution, reals=[cc * v for v in f._reals],
                                    promoted=f.promoted)
        fr = Fraction(c)
        return StepFunction(self.resolution, nums=[fr.numerator * v for v in self._nums],
                            den=self._den * fr.denominator, promoted=self.promoted)

    def mul(self, other: "StepFunction") -> "StepFunction":
        """Pointwise product."""
        a, b = self._common(self, other)
        promoted = a.promoted or b.promoted
        if a.backend == REAL:
            with workdps():
                return StepFunction(a.resolution,
                                    reals=[x * y for x, y in zip(a._reals, b._reals)],
                                    promoted=promoted)
        nums = [x * y for x, y in zip(a._nums, b._nums)]
        return StepFunction(a.resolution, nums=nums, den=a._den * b._den, promoted=promoted)

    def __abs__(self) -> "StepFunction":
        if self.backend == REAL:
            return StepFunction(self.resolution, reals=[abs(v) for v in self._reals],
                                promoted=self.promoted)
        return StepFunction(self.resolution, nums=[abs(v) for v in self._nums],
                            den=self._den, promoted=self.promoted)

    def max_with(self, other: "StepFunction") -> "StepFunction":
        """Pointwise maximum, exact on the rational backend."""
        a, b = self._common(self, other)
        promoted = a.promoted or b.promoted
        if a.backend == REAL:
            return StepFunction(a.resolution,
                                reals=[max(x, y) for x, y in zip(a._reals, b._reals)],
                                promoted=promoted)
        da, db = a._den, b._den
        nums = [x * db if x * db >= y * da else y * da
                for x, y in zip(a._nums, b._nums)]
        return StepFunction(a.resolution, nums=nums, den=da * db, promoted=promoted)

    def __eq__(self, other) -> bool:
        if not isinstance(other, StepFunction):
            return NotImplemented
        a, b = self._common(self, other)
        if a.backend == REAL:
            return all(x == y for x, y in zip(a._reals, b._reals))
        da, db = a._den, b._den
        return all(x * db == y * da for x, y in zip(a._nums, b._nums))

    __hash__ = None  # lazy value cache; not hashable

    def is_zero(self) -> bool:
        if self.backend == REAL:
            return all(v == 0 for v in self._reals)
        return all(v == 0 for v in self._nums)

    # -- analysis ------------------------------------------------------------

    def walsh_coefficients(self) -> tuple:
        """(f^(0), ..., f^(2^N - 1)) with f^(i) = integral of f * w_i; exact
        on the rational backend via the fast butterfly."""
        N = self.resolution
        rev = _core.bitrev_table(N)
        if self.backend == REAL:
            with workdps():
                tmp = _fwht_mpf([self._reals[rev[c]] for c in range(self.size)])
                scale = mpmath.mpf(1) / self.size
                return tuple(v * scale for v in tmp)
        tmp = _fwht_ints([self._nums[rev[c]] for c in range(self.size)])
        den = self._den << N
        return tuple(Fraction(v, den) for v in tmp)

    def coefficient_ints(self) -> tuple[list[int], int]:
        """Scaled-integer coefficients (nums, den); rational backend only."""
        if self.backend != RATIONAL:
            raise ValueError("integer coefficients exist only on the rational backend")
        N = self.resolution
        rev = _core.bitrev_table(N)
        tmp = _fwht_ints([self._nums[rev[c]] for c in range(self.size)])
        return tmp, self._den << N

    def integrate(self, region: DyadicInterval | None = None, absolute: bool = False) -> Scalar:
        """Exact integral over [0,1) or over a dyadic interval (or its
        complement via the interval's flag)."""
        f = self
        if region is not None and region.level > f.resolution:
            f = f.refine(region.level)
        if f.backend == REAL:
            vals = [abs(v) for v in f._reals] if absolute else list(f._reals)
            with workdps():
                if region is None:
                    return mpmath.fsum(vals) / f.size
                lo, hi = region.cell_range(f.resolution)
                inner = mpmath.fsum(vals[lo:hi])
                total = mpmath.fsum(vals) if region.complement else inner
                return ((total - inner) if region.complement else inner) / f.size
        vals = [abs(v) for v in f._nums] if absolute else f._nums
        if region is None:
            return Fraction(sum(vals), f._den << f.resolution)
        lo, hi = region.cell_range(f.resolution)
        inner = sum(vals[lo:hi])
        s = sum(vals) - inner if region.complement else inner
        return Fraction(s, f._den << f.resolution)

    def sup_abs(self) -> Scalar:
        if self.backend == REAL:
            return max(abs(v) for v in self._reals)
        return Fraction(max(abs(v) for v in self._nums), self._den)

    # -- serialization ---------------------------------------------------------

    def save_text(self, path) -> None:
        """Text dump: header then one exact value per line.  Bit-exact
        round-trip on the rational backend."""
        lines = [_FORMAT_TAG, f"resolution {self.resolution}", f"backend {self.backend}"]
        if self.backend == REAL:
            lines.append(f"precision {mpmath.mp.dps}")
            lines += [mpmath.nstr(v, mpmath.mp.dps) for v in self._reals]
        else:
            lines += [format_scalar(v) for v in self.values]
        with open(path, "w") as fh:
            fh.write("\n".join(lines) + "\n")

    @classmethod
    def load_text(cls, path) -> "StepFunction":
        with open(path) as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
        if not lines or lines[0] != _FORMAT_TAG:
            raise ValueError("not a stepfunction text file")
        head = dict(ln.split(None, 1) for ln in lines[1:4] if " " in ln)
        res = int(head["resolution"])
        backend = head["backend"]
        if backend == REAL:
            body = lines[4:]
            with workdps(int(head.get("precision", 0)) or None):
                return cls(res, reals=[mpmath.mpf(v) for v in body])
        body = lines[3:]
        return cls.from_values([parse_exact(v) for v in body], res)


def synthesize(coeff_nums: Sequence[int], den: int, resolution: int) -> StepFunction:
    """Exact synthesis of sum_i (coeff_nums[i]/den) w_i as a StepFunction.

    The workhorse for kernel construction: integer butterflies, one shared
    denominator, no intermediate Fractions.
    """
    size = 1 << resolution
    if len(coeff_nums) > size:
        raise ValueError("resolution too small for the coefficient count")
    vals = list(coeff_nums) + [0] * (size - len(coeff_nums))
    tmp = _fwht_ints(vals)
    rev = _core.bitrev_table(resolution)
    return StepFunction(resolution, nums=[tmp[rev[c]] for c in range(size)], den=den)


def walsh_function(m: int, resolution: int) -> StepFunction:
    """w_m sampled on the grid (exact; requires 2^resolution > m)."""
    if m >= (1 << resolution):
        raise ValueError("resolution too small for this Walsh index")
    row = _core.walsh_row(m, resolution)
    return StepFunction(resolution, nums=[int(v) for v in row], den=1)

"""The dyadic group: points of [0,1) with terminating binary expansions,
bitwise-xor addition, dyadic intervals, binary-index bookkeeping and
Walsh-Paley evaluation.

Conventions: a point x = sum_j x_j 2^{-(j+1)} is stored as the bitmask
sum_j x_j 2^j, so xor of masks is the group operation.  For an index
n = sum_k eps_k 2^k, w_n(x) = (-1)^{sum_k eps_k x_k}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property


class BinaryIndex:
    """A non-negative integer with its binary-expansion bookkeeping:
    coefficients eps_k, order |n|, decreasing exponents n_1 > ... > n_r and
    the tails n^(0) = n, n^(i) = n^(i-1) - 2^(n_i) down to n^(r) = 0.
    """

    __slots__ = ("n", "__dict__")

    def __init__(self, n: int):
        if n < 0:
            raise ValueError("binary index must be non-negative")
        self.n = int(n)

    @property
    def order(self) -> int:
        """|n| = position of the highest set bit; defined for n >= 1."""
        if self.n == 0:
            raise ValueError("order |n| is undefined for n = 0")
        return self.n.bit_length() - 1

    @cached_property
    def bits(self) -> tuple[int, ...]:
        """(eps_0, ..., eps_|n|); empty for n = 0."""
        if self.n == 0:
            return ()
        return tuple((self.n >> k) & 1 for k in range(self.order + 1))

    def eps(self, k: int) -> int:
        return (self.n >> k) & 1

    @cached_property
    def exponents(self) -> tuple[int, ...]:
        """Set-bit positions n_1 > n_2 > ... > n_r."""
        return tuple(k for k in range(self.n.bit_length() - 1, -1, -1) if (self.n >> k) & 1)

    @cached_property
    def tails(self) -> tuple[int, ...]:
        """(n^(0), ..., n^(r)) with n^(i) = n^(i-1) - 2^(n_i)."""
        out = [self.n]
        for e in self.exponents:
            out.append(out[-1] - (1 << e))
        return tuple(out)

    @property
    def popcount(self) -> int:
        return self.n.bit_count()

    def __index__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        if isinstance(other, BinaryIndex):
            return self.n == other.n
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.n)

    def __repr__(self) -> str:
        return f"BinaryIndex({self.n})"


@dataclass(frozen=True)
class DyadicPoint:
    """A dyadic rational in [0,1) with terminating expansion, as a bitmask."""

    bitmask: int = 0

    def __post_init__(self):
        if self.bitmask < 0:
            raise ValueError("bitmask must be non-negative")

    @classmethod
    def from_bits(cls, bits) -> "DyadicPoint":
        mask = 0
        for j, b in enumerate(bits):
            if b not in (0, 1):
                raise ValueError("bits must be 0 or 1")
            mask |= b << j
        return cls(mask)

    @classmethod
    def from_fraction(cls, value) -> "DyadicPoint":
        """Exact conversion of a dyadic rational a/2^m in [0,1)."""
        fr = Fraction(value)
        if not 0 <= fr < 1:
            raise ValueError("point must lie in [0,1)")
        den = fr.denominator
        if den & (den - 1):
            raise ValueError(f"{fr} is not a dyadic rational")
        m = den.bit_length() - 1
        a = fr.numerator
        mask = 0
        for j in range(m):
            mask |= ((a >> (m - 1 - j)) & 1) << j
        return cls(mask)

    @classmethod
    def e(cls, j: int) -> "DyadicPoint":
        """The point e_j = 2^(-j-1)."""
        return cls(1 << j)

    def bit(self, j: int) -> int:
        return (self.bitmask >> j) & 1

    @property
    def value(self) -> Fraction:
        v = Fraction(0)
        m = self.bitmask
        j = 0
        while m:
            if m & 1:
                v += Fraction(1, 1 << (j + 1))
            m >>= 1
            j += 1
        return v

    def cell(self, N: int) -> int:
        """Index of the level-N dyadic cell containing the point.

        Bits beyond position N only move the point inside its cell.
        """
        c = 0
        for j in range(N):
            c |= self.bit(j) << (N - 1 - j)
        return c

    def __repr__(self) -> str:
        return f"DyadicPoint({self.value})"


def dyadic_add(x: DyadicPoint, y: DyadicPoint) -> DyadicPoint:
    """Bitwise-xor addition; each argument is its own inverse."""
    return DyadicPoint(x.bitmask ^ y.bitmask)


def walsh_eval(n, x) -> int:
    """w_n(x) = (-1)^(number of common set bits of n and x), in {+1, -1}."""
    ni = n.n if isinstance(n, BinaryIndex) else int(n)
    if ni < 0:
        raise ValueError("walsh index must be non-negative")
    if not isinstance(x, DyadicPoint):
        x = DyadicPoint.from_fraction(x)
    return 1 - 2 * ((ni & x.bitmask).bit_count() & 1)


@dataclass(frozen=True)
class DyadicInterval:
    """I(l, k) = [(l-1)/2^k, l/2^k); complement=True denotes [0,1) \\ I(l,k)."""

    level: int
    index: int
    complement: bool = False

    def __post_init__(self):
        if self.level < 0:
            raise ValueError("level must be non-negative")
        if not 0 < self.index <= (1 << self.level):
            raise ValueError("index must satisfy 0 < l <= 2^k")

    @classmethod
    def base(cls, k: int, complement: bool = False) -> "DyadicInterval":
        """I_k = I_k(0), the left-most level-k interval."""
        return cls(k, 1, complement)

    @classmethod
    def containing(cls, x, k: int, complement: bool = False) -> "DyadicInterval":
        """I_k(x), the level-k interval containing x."""
        if not isinstance(x, DyadicPoint):
            x = DyadicPoint.from_fraction(x)
        c = 0
        for j in range(k):
            c |= x.bit(j) << (k - 1 - j)
        return cls(k, c + 1, complement)

    @property
    def left(self) -> Fraction:
        return Fraction(self.index - 1, 1 << self.level)

    @property
    def right(self) -> Fraction:
        return Fraction(self.index, 1 << self.level)

    @property
    def measure(self) -> Fraction:
        m = Fraction(1, 1 << self.level)
        return 1 - m if self.complement else m

    def contains(self, x) -> bool:
        if isinstance(x, DyadicPoint):
            x = x.value
        inside = self.left <= x < self.right
        return not inside if self.complement else inside

    def cell_range(self, N: int) -> tuple[int, int]:
        """Half-open cell-index range [lo, hi) covered at resolution N >= level."""
        if N < self.level:
            raise ValueError("resolution finer than interval level required")
        w = 1 << (N - self.level)
        return (self.index - 1) * w, self.index * w

"""Scalar backends: exact rationals and high-precision reals.

Exact values are plain ``fractions.Fraction`` (or ``int``); high-precision
values are ``mpmath.mpf`` carried at a configured number of significant
decimal digits (default 50, overridable via ``WALSHNORLUND_DPS`` or
:func:`set_default_dps`).  Mixing the two promotes to the real backend and
never silently the other way.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction
from typing import Union

import mpmath

RATIONAL = "exact-rational"
REAL = "high-precision-real"

Scalar = Union[int, Fraction, mpmath.mpf]

_default_dps = 50
_env = os.environ.get("WALSHNORLUND_DPS")
if _env:
    try:
        _default_dps = max(int(_env), 5)
    except ValueError:
        pass


def default_dps() -> int:
    return _default_dps


def set_default_dps(dps: int) -> None:
    global _default_dps
    if dps < 5:
        raise ValueError("precision must be at least 5 digits")
    _default_dps = dps


def workdps(dps: int | None = None):
    """mpmath working-precision context at `dps` (default: package default)."""
    return mpmath.workdps(dps if dps is not None else _default_dps)


def is_exact(x: Scalar) -> bool:
    return isinstance(x, (int, Fraction))


def backend_of(x: Scalar) -> str:
    return RATIONAL if is_exact(x) else REAL


def to_real(x: Scalar, dps: int | None = None) -> mpmath.mpf:
    with workdps(dps):
        if isinstance(x, Fraction):
            return mpmath.mpf(x.numerator) / x.denominator
        return mpmath.mpf(x)


def parse_exact(text: str) -> Fraction:
    """Parse an exact rational literal: "a/b", integer, or decimal string.

    Decimal strings parse exactly ("0.1" -> 1/10), so exactness survives
    command-line flags.
    """
    return Fraction(text.strip())


def format_scalar(x: Scalar, dps: int | None = None) -> str:
    """Deterministic string form: "n" / "a/b" for exact, n-digit for real."""
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"
    return mpmath.nstr(x, dps if dps is not None else _default_dps)


def _iroot(n: int, k: int) -> int | None:
    """Exact integer k-th root of n >= 0, or None."""
    if n < 0:
        return None
    if n in (0, 1):
        return n
    if k == 2:
        r = math.isqrt(n)
        return r if r * r == n else None
    r = 1 << -(-n.bit_length() // k)
    while True:
        t = ((k - 1) * r + n // r ** (k - 1)) // k
        if t >= r:
            break
        r = t
    return r if r**k == n else None


def nth_root_exact(x: Fraction, k: int) -> Fraction | None:
    """Exact k-th root of a non-negative rational, or None if irrational."""
    num = _iroot(x.numerator, k)
    if num is None:
        return None
    den = _iroot(x.denominator, k)
    if den is None:
        return None
    return Fraction(num, den)

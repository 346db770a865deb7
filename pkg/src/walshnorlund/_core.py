"""Backend selection for the hot integer kernels.

The compiled extension (``_speedups``, Cython) is preferred; the numpy
fallback (``_purecore``) is selected when the extension is missing or when
``WALSHNORLUND_PURE=1`` is set.  Both expose the same functions with
identical exact semantics (see tests/test_backends.py).
"""

from __future__ import annotations

import os

import numpy as np

from . import _purecore

if os.environ.get("WALSHNORLUND_PURE", "") not in ("", "0"):
    _impl = _purecore
else:
    try:
        from . import _speedups as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _purecore

# Scaled-integer computations dispatch to int64 only below this bound;
# cross-multiplied comparisons must also stay below it.
I64_SAFE = 1 << 62

_REV_CACHE: dict[int, np.ndarray] = {}


def backend_name() -> str:
    return _impl.BACKEND_NAME


def bitrev_table(N: int) -> np.ndarray:
    """rev[c] reverses the low N bits of c; maps cell index to Walsh bitmask."""
    tab = _REV_CACHE.get(N)
    if tab is None:
        c = np.arange(1 << N, dtype=np.int64)
        tab = np.zeros_like(c)
        for j in range(N):
            tab |= ((c >> j) & 1) << (N - 1 - j)
        tab.setflags(write=False)
        _REV_CACHE[N] = tab
    return tab


def fwht_i64(a: np.ndarray) -> None:
    _impl.fwht_i64(a)


def fwht_obj(a: list) -> list:
    return _impl.fwht_obj(a)


def walsh_row(m: int, N: int) -> np.ndarray:
    return _impl.walsh_row(m, N, bitrev_table(N))


def fejer_sweep(N: int, nmax: int) -> tuple[np.ndarray, np.ndarray]:
    return _impl.fejer_sweep(N, nmax, bitrev_table(N))


def norlund_max_sweep(
    coeff: np.ndarray, qs: np.ndarray, ns: np.ndarray, N: int
) -> tuple[np.ndarray, np.ndarray]:
    return _impl.norlund_max_sweep(coeff, qs, ns, N, bitrev_table(N))

"""Weight sequences {q_k}, prefix sums Q_n = q_0 + ... + q_{n-1}, and the
executable boundedness criteria driven by them.

Built-in families:

* ``fejer``        q_k = 1 (Q_n = n), exact.
* ``cesaro(a)``    q_k = A_k^(a-1) with the Cesaro numbers
                   A_0^b = 1, A_k^b = A_{k-1}^b (b+k)/k; exact for rational
                   a in (0,1); Q_n = A_{n-1}^a.
* ``power(a)``     q_0 = 1, q_k = k^(a-1) for a in (0,1); high-precision.
* ``logarithmic``  q_0 = 1, q_k = 1/k (the a = 0 power case), exact.
* ``custom``       finite table or callable, exact values.

Prefix sums are exact and cached for moderate n; criterion evaluation needs
Q at indices up to 2^40 and uses 50-digit closed forms there (gamma ratios,
Hurwitz zeta, harmonic numbers).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import mpmath

from .dyadic import BinaryIndex
from .scalars import (RATIONAL, REAL, Scalar, backend_of, default_dps, format_scalar,
                      parse_exact, to_real, workdps)

# Above this index exact prefix sums are not materialized; closed forms at
# the working precision take over (criteria query Q at 2^j for j <= 40).
EXACT_HORIZON = 1 << 15


class WeightSequence:
    """A non-negative weight sequence with cached prefix sums.

    The prefix cache is append-only (one writer extends it; readers only see
    the filled prefix), all other state is immutable.
    """

    def __init__(self, tag: str, qfunc: Callable[[int], Scalar], *, alpha=None,
                 exact: bool, non_increasing: bool, label: str | None = None,
                 length: int | None = None, check_horizon: int = 256):
        self.tag = tag
        self.alpha = alpha
        self.exact = exact
        self.non_increasing = non_increasing
        self.label = label or tag
        self.length = length
        self._qfunc = qfunc
        self._q: list[Scalar] = []
        self._Q: list[Scalar] = [0 if exact else None]  # Q_0 = 0 by convention
        self._qreal_cache: dict[tuple[int, int], mpmath.mpf] = {}
        if exact:
            self._Q[0] = Fraction(0)
        q0 = self.q(0)
        if not q0 > 0:
            raise ValueError("q_0 must be positive")
        horizon = min(check_horizon, (length or check_horizon))
        if non_increasing:
            prev = q0
            for k in range(1, horizon):
                cur = self.q(k)
                if cur > prev:
                    raise ValueError(
                        f"{self.label}: declared non-increasing but q_{k} > q_{k-1}")
                prev = cur
        for k in range(horizon):
            if self.q(k) < 0:
                raise ValueError(f"{self.label}: negative weight q_{k}")

    # -- evaluation ---------------------------------------------------------

    def q(self, k: int) -> Scalar:
        if k < 0:
            raise ValueError("weight index must be non-negative")
        if self.length is not None and k >= self.length:
            raise ValueError(f"{self.label}: sequence has only {self.length} terms")
        while len(self._q) <= k:
            self._q.append(self._qfunc(len(self._q)))
        return self._q[k]

    def Q(self, n: int) -> Scalar:
        """Q_n = sum_{k<n} q_k, exact on exact families (n within the cache
        horizon); use :meth:`Q_real` for huge indices."""
        if n < 0:
            raise ValueError("prefix index must be non-negative")
        if n > EXACT_HORIZON:
            raise ValueError(f"exact prefix sums are kept only up to {EXACT_HORIZON}; "
                             "use Q_real for larger indices")
        if self._Q[0] is None:
            with workdps():
                self._Q[0] = mpmath.mpf(0)
        while len(self._Q) <= n:
            k = len(self._Q) - 1
            if self.exact:
                self._Q.append(self._Q[-1] + self.q(k))
            else:
                with workdps():
                    self._Q.append(self._Q[-1] + to_real(self.q(k)))
        return self._Q[n]

    def Q_real(self, n: int, dps: int | None = None) -> mpmath.mpf:
        """Q_n at the working precision.

        Families with a closed form (gamma ratio, Hurwitz zeta, harmonic
        numbers) use it beyond n = 64, which keeps criterion scans at
        indices up to 2^40 cheap; otherwise the exact cache is converted.
        """
        key = (n, dps if dps is not None else default_dps())
        hit = self._qreal_cache.get(key)
        if hit is not None:
            return hit
        with workdps(dps):
            val = self._Q_closed(n) if n > 64 else None
            if val is None:
                if n > EXACT_HORIZON:
                    raise ValueError(f"{self.label}: no closed form for Q at "
                                     f"index {n} and summation is impractical")
                val = to_real(self.Q(n))
        self._qreal_cache[key] = val
        return val

    def _Q_closed(self, n: int) -> mpmath.mpf | None:
        return None

    def scaled_prefix_ints(self, nmax: int) -> tuple[list[int], int]:
        """(Qs, den) with Q_m = Qs[m]/den for 0 <= m <= nmax; exact families."""
        if not self.exact:
            raise ValueError("scaled prefix sums need an exact family")
        fracs = [self.Q(m) for m in range(nmax + 1)]
        den = 1
        for f in fracs:
            den = den * f.denominator // math.gcd(den, f.denominator)
        return [f.numerator * (den // f.denominator) for f in fracs], den

    def __repr__(self) -> str:
        return f"WeightSequence({self.label})"


class _FejerWeights(WeightSequence):
    def __init__(self):
        super().__init__("fejer", lambda k: Fraction(1), exact=True,
                         non_increasing=True, label="fejer")

    def Q(self, n: int) -> Fraction:
        return Fraction(n)

    def Q_real(self, n: int, dps: int | None = None) -> mpmath.mpf:
        with workdps(dps):
            return mpmath.mpf(n)

    def scaled_prefix_ints(self, nmax: int) -> tuple[list[int], int]:
        return list(range(nmax + 1)), 1


class _CesaroWeights(WeightSequence):
    def __init__(self, alpha):
        alpha = Fraction(alpha)
        if not 0 < alpha < 1:
            raise ValueError("cesaro exponent must lie in (0,1)")
        self._acache = [Fraction(1)]  # A_k^(alpha-1)
        self._beta = alpha - 1
        super().__init__("cesaro", self._a, alpha=alpha, exact=True,
                         non_increasing=True, label=f"cesaro({alpha})")

    def _a(self, k: int) -> Fraction:
        while len(self._acache) <= k:
            m = len(self._acache)
            self._acache.append(self._acache[-1] * (self._beta + m) / m)
        return self._acache[k]

    def _Q_closed(self, n: int) -> mpmath.mpf:
        # Q_n = A_{n-1}^alpha = Gamma(n+alpha) / (Gamma(alpha+1) Gamma(n))
        a = to_real(self.alpha)
        return mpmath.exp(mpmath.loggamma(n + a) - mpmath.loggamma(n)) / mpmath.gamma(a + 1)


class _PowerWeights(WeightSequence):
    def __init__(self, alpha):
        alpha = Fraction(alpha)
        if not 0 < alpha < 1:
            raise ValueError("power exponent must lie in (0,1); use logarithmic for 0")
        self._expo = alpha - 1
        super().__init__("power", self._qk, alpha=alpha, exact=False,
                         non_increasing=True, label=f"power({alpha})")

    def _qk(self, k: int) -> mpmath.mpf:
        with workdps():
            if k == 0:
                return mpmath.mpf(1)
            return mpmath.mpf(k) ** to_real(self._expo)

    def _Q_closed(self, n: int) -> mpmath.mpf:
        # q_0 + sum_{j=1}^{n-1} j^(alpha-1) via the Hurwitz zeta tail.
        s = to_real(1 - self.alpha)
        return 1 + mpmath.zeta(s) - mpmath.zeta(s, n)


class _LogarithmicWeights(WeightSequence):
    def __init__(self):
        super().__init__("logarithmic",
                         lambda k: Fraction(1) if k == 0 else Fraction(1, k),
                         exact=True, non_increasing=True, label="logarithmic")

    def _Q_closed(self, n: int) -> mpmath.mpf:
        return 1 + mpmath.harmonic(n - 1)


def make_family(tag: str, alpha=None, values: Sequence | None = None,
                evaluator: Callable[[int], Scalar] | None = None,
                non_increasing: bool | None = None,
                check_horizon: int = 256) -> WeightSequence:
    """Construct a built-in weight family or a custom sequence."""
    if tag == "fejer":
        return _FejerWeights()
    if tag == "cesaro":
        if alpha is None:
            raise ValueError("cesaro needs an exponent")
        return _CesaroWeights(alpha)
    if tag == "power":
        if alpha is None:
            raise ValueError("power needs an exponent")
        if Fraction(alpha) == 0:
            return _LogarithmicWeights()
        return _PowerWeights(alpha)
    if tag == "logarithmic":
        return _LogarithmicWeights()
    if tag == "custom":
        if values is not None:
            table = [Fraction(v) for v in values]
            return WeightSequence("custom", lambda k: table[k], exact=True,
                                  non_increasing=bool(non_increasing),
                                  label="custom", length=len(table),
                                  check_horizon=check_horizon)
        if evaluator is not None:
            probe = evaluator(0)
            return WeightSequence("custom", evaluator,
                                  exact=backend_of(probe) == RATIONAL,
                                  non_increasing=bool(non_increasing),
                                  label="custom", check_horizon=check_horizon)
        raise ValueError("custom needs values or an evaluator")
    raise ValueError(f"unknown weight family {tag!r}")


def load_custom(path, non_increasing: bool = False) -> WeightSequence:
    """Two-column text file (index, value); exact "a/b" literals accepted.

    Indices must run 0..m contiguously; '#' starts a comment.
    """
    table: list[Fraction] = []
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"expected 'index value', got {raw!r}")
            idx, val = int(parts[0]), parse_exact(parts[1])
            if idx != len(table):
                raise ValueError(f"weight indices must be contiguous from 0, got {idx}")
            table.append(val)
    if not table:
        raise ValueError("empty weight file")
    return make_family("custom", values=table, non_increasing=non_increasing)


def prefix_sum(q: WeightSequence, n: int) -> Scalar:
    """Q_n, exact when the family is exact."""
    if n < 1:
        raise ValueError("prefix sums are defined for n >= 1")
    return q.Q(n)


def regularity_check(q: WeightSequence, horizon: int) -> dict:
    """The ratios q_{n-1}/Q_n for n <= horizon.

    A summability method with these weights is regular iff the ratios tend
    to 0; only the numeric series plus a monotone-envelope summary is
    reported (a finite scan cannot decide a limit).
    """
    if horizon < 2:
        raise ValueError("horizon must be at least 2")
    series = []
    for n in range(1, horizon + 1):
        val = q.q(n - 1) / q.Q(n) if q.exact else to_real(q.q(n - 1)) / q.Q_real(n)
        series.append((n, val))
    vals = [v for _, v in series]
    tail_start = horizon
    for i in range(len(vals) - 1, 0, -1):
        if vals[i - 1] < vals[i]:
            break
        tail_start = i
    return {
        "series": series,
        "peak": max(vals),
        "last": vals[-1],
        "non_increasing_from": tail_start,
    }


def norm_equivalence_rhs(q: WeightSequence, n) -> Scalar:
    """(1/Q_n) sum_{k=1}^{|n|} |eps_k(n) - eps_{k+1}(n)| Q_{2^k}: the
    prefix-sum functional that is equivalent (two-sided, for non-increasing
    weights) to the L1 norm of the n-th kernel."""
    if not q.non_increasing:
        raise ValueError("the L1-norm equivalence is only claimed for "
                         "non-increasing weights")
    idx = n if isinstance(n, BinaryIndex) else BinaryIndex(n)
    if idx.n < 2:
        raise ValueError("needs n >= 2")
    total = 0
    for k in range(1, idx.order + 1):
        if idx.eps(k) != idx.eps(k + 1):
            total += q.Q(1 << k)
    return total / q.Q(idx.n)


def h1_criterion_term(q: WeightSequence, n) -> Scalar:
    """(1/Q_n) sum_{k=1}^{|n|} Q_{2^k} for an arbitrary index n."""
    idx = n if isinstance(n, BinaryIndex) else BinaryIndex(n)
    total = sum(q.Q(1 << k) for k in range(1, idx.order + 1))
    return total / q.Q(idx.n)


def q_doubling_check(q: WeightSequence, n_max: int) -> dict:
    """Verify Q_{2^n}/2^n <= Q_{2^s}/2^s for all 0 <= s <= n <= n_max
    (exact comparisons).  Violations witness a false monotonicity claim."""
    if not q.non_increasing:
        raise ValueError("doubling check applies to declared non-increasing weights")
    ratios = [q.Q(1 << m) / Fraction(1 << m) if q.exact
              else q.Q_real(1 << m) / (1 << m) for m in range(n_max + 1)]
    violations = [(s, n) for n in range(n_max + 1) for s in range(n + 1)
                  if ratios[s] < ratios[n]]
    return {"ok": not violations, "violations": violations, "ratios": ratios}


# -- boundedness criteria ----------------------------------------------------

VERDICT_BOUNDED = "bounded-evidence"
VERDICT_DIVERGENT = "divergent-evidence"
VERDICT_INCONCLUSIVE = "inconclusive"


@dataclass
class CriterionReport:
    criterion: str
    family: str
    p: Fraction
    n_max: int
    series: list  # (N, B(N)) pairs
    running_sup: Scalar
    ratio: float
    slope: float
    verdict: str
    backend: str

    def to_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "family": self.family,
            "p": format_scalar(self.p),
            "n_max": self.n_max,
            "series": [{"index": n, "value": format_scalar(v)} for n, v in self.series],
            "running_sup": format_scalar(self.running_sup),
            "ratio_full_to_half": repr(self.ratio),
            "log2_slope_upper_half": repr(self.slope),
            "verdict": self.verdict,
            "backend": self.backend,
        }


def _fit_verdict(series: list) -> tuple[str, float, float]:
    """(verdict, ratio, slope) for a positive series B(1..N_max).

    bounded-evidence: B(N_max)/B(ceil(N_max/2)) <= 1.05 and base-2
    log-growth slope (least squares on the upper half) <= 0.01;
    divergent-evidence: slope >= 0.05 with non-decreasing upper half;
    otherwise inconclusive.  A finite scan cannot decide a supremum, so
    these are evidence labels, never claims.
    """
    n_max = series[-1][0]
    mid = (n_max + 1) // 2
    vals = dict(series)
    with workdps():
        ratio = float(to_real(vals[n_max]) / to_real(vals[mid]))
        upper = [(n, float(mpmath.log(to_real(v), 2))) for n, v in series if n >= mid]
    xs = [n for n, _ in upper]
    ys = [y for _, y in upper]
    k = len(xs)
    xbar, ybar = sum(xs) / k, sum(ys) / k
    denom = sum((x - xbar) ** 2 for x in xs)
    slope = sum((x - xbar) * (y - ybar) for x, y in zip(xs, ys)) / denom if denom else 0.0
    monotone = all(vals[xs[i + 1]] >= vals[xs[i]] for i in range(k - 1))
    if ratio <= 1.05 and slope <= 0.01:
        verdict = VERDICT_BOUNDED
    elif slope >= 0.05 and monotone:
        verdict = VERDICT_DIVERGENT
    else:
        verdict = VERDICT_INCONCLUSIVE
    return verdict, ratio, slope


def criterion_hp(q: WeightSequence, p, n_max: int) -> CriterionReport:
    """Evaluate B_p(N) = (2^{N(1-p)}/Q_{2^N}^p) sum_{j<=N} Q_{2^j}^p 2^{j(p-1)}
    for N = 1..n_max.  sup_N B_p(N) < infinity is the exact boundedness
    criterion for the maximal Norlund mean on the p-Hardy space (1/2 < p <= 1,
    non-increasing positive weights).
    """
    p = Fraction(p)
    if not Fraction(1, 2) < p <= 1:
        raise ValueError(
            "criterion applies for 1/2 < p <= 1; for p <= 1/2 the maximal "
            "operator is never bounded for non-increasing weights")
    if n_max < 4:
        raise ValueError("n_max must be at least 4")
    exact = p == 1 and isinstance(q, _FejerWeights)
    series = []
    if exact:
        for N in range(1, n_max + 1):
            b = sum(q.Q(1 << j) for j in range(1, N + 1)) / q.Q(1 << N)
            series.append((N, b))
        backend = RATIONAL
    else:
        with workdps():
            pr = to_real(p)
            qpow = [mpmath.mpf(0)] + [q.Q_real(1 << j) ** pr for j in range(1, n_max + 1)]
            terms = [qpow[j] * mpmath.power(2, j * (pr - 1)) for j in range(1, n_max + 1)]
            acc = mpmath.mpf(0)
            for N in range(1, n_max + 1):
                acc += terms[N - 1]
                b = mpmath.power(2, N * (1 - pr)) / qpow[N] * acc
                series.append((N, b))
        backend = REAL
    verdict, ratio, slope = _fit_verdict(series)
    return CriterionReport(
        criterion="hp-boundedness", family=q.label, p=p, n_max=n_max,
        series=series, running_sup=max(v for _, v in series),
        ratio=ratio, slope=slope, verdict=verdict, backend=backend)


def criterion_h1(q: WeightSequence, n_max: int) -> CriterionReport:
    """The p = 1 criterion sup_N (1/Q_{2^N}) sum_{j<=N} Q_{2^j}; equivalent
    both to H_1 -> L_1 and to L_inf -> L_inf boundedness of the maximal mean.

    The same functional over arbitrary n is exposed as
    :func:`h1_criterion_term` for spot checks.
    """
    if n_max < 4:
        raise ValueError("n_max must be at least 4")
    exact = q.exact and isinstance(q, _FejerWeights)
    series = []
    if exact:
        for N in range(1, n_max + 1):
            series.append((N, sum(q.Q(1 << j) for j in range(1, N + 1)) / q.Q(1 << N)))
        backend = RATIONAL
    else:
        with workdps():
            qq = [mpmath.mpf(0)] + [q.Q_real(1 << j) for j in range(1, n_max + 1)]
            acc = mpmath.mpf(0)
            for N in range(1, n_max + 1):
                acc += qq[N]
                series.append((N, acc / qq[N]))
        backend = REAL
    verdict, ratio, slope = _fit_verdict(series)
    rep = CriterionReport(
        criterion="h1-boundedness", family=q.label, p=Fraction(1), n_max=n_max,
        series=series, running_sup=max(v for _, v in series),
        ratio=ratio, slope=slope, verdict=verdict, backend=backend)
    return rep

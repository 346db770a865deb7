"""Kernels against their definitional sums, the shifted-Dirichlet identity,
the two-stage decomposition, and the sup-kernel sweep."""

import random
from fractions import Fraction as F

import pytest

from walshnorlund.dyadic import DyadicInterval
from walshnorlund.kernels import (decompose_kernel, dirichlet, fejer,
                                  fejer_l1_norms, fejer_shift_form, kernel_sup,
                                  norlund_kernel)
from walshnorlund.stepfunc import StepFunction, walsh_function
from walshnorlund.weights import make_family

FEJER = make_family("fejer")
CESARO = make_family("cesaro", alpha=F(1, 2))
LOG = make_family("logarithmic")
GEOMETRIC = make_family("custom", evaluator=lambda k: F(1, 2**k), non_increasing=True)


def dirichlet_by_rows(n, N):
    """Oracle: term-by-term sum of sampled Walsh functions."""
    acc = StepFunction.constant(0, N)
    for k in range(n):
        acc = acc + walsh_function(k, N)
    return acc


def test_dirichlet_examples():
    assert list(dirichlet(8, 3).values) == [8, 0, 0, 0, 0, 0, 0, 0]
    assert dirichlet(1, 3) == StepFunction.constant(1, 3)
    assert list(dirichlet(3, 2).values) == [3, 1, 1, -1]


def test_dirichlet_against_row_oracle():
    rng = random.Random(2)
    for n in list(range(9)) + [rng.randrange(9, 33) for _ in range(4)]:
        assert dirichlet(n, 6) == dirichlet_by_rows(n, 6)


def test_dirichlet_power_of_two_is_scaled_indicator():
    for n in range(13):
        expected = StepFunction.indicator(DyadicInterval.base(n), n, scale=1 << n)
        assert dirichlet(1 << n, n) == expected


def test_dirichlet_peak_and_mass():
    for n in (1, 2, 3, 17, 100, 1000, 4096):
        N = max((n - 1).bit_length(), 1)
        d = dirichlet(n, N)
        assert d.value_at(F(0)) == n
        assert d.integrate() == 1


def test_dirichlet_resolution_guard():
    with pytest.raises(ValueError):
        dirichlet(5, 2)
    dirichlet(4, 2)  # n = 2^N is representable


def test_fejer_examples():
    assert fejer(1, 2) == StepFunction.constant(1, 2)
    assert list(fejer(2, 2).values) == [F(3, 2), F(3, 2), F(1, 2), F(1, 2)]
    assert list(fejer(3, 2).values) == [2, F(4, 3), F(2, 3), 0]


def test_fejer_against_dirichlet_sum_oracle():
    for n in (1, 2, 3, 5, 8, 21, 32):
        acc = StepFunction.constant(0, 5)
        for k in range(1, n + 1):
            acc = acc + dirichlet(k, 5)
        assert fejer(n, 5) == acc.scale(F(1, n))


def test_fejer_mass():
    for n in (1, 7, 64, 501, 4096):
        N = max((n - 1).bit_length(), 1)
        assert fejer(n, N).integrate() == 1


def test_norlund_examples():
    for n in (1, 2, 3, 13, 40, 64):
        assert norlund_kernel(FEJER, n, 6) == fejer(n, 6)
    assert list(norlund_kernel(GEOMETRIC, 2, 1).values) == [F(5, 3), F(1, 3)]


def test_norlund_against_weighted_sum_oracle():
    for q in (CESARO, LOG, GEOMETRIC):
        for n in (1, 2, 3, 7, 12, 31):
            acc = StepFunction.constant(0, 5)
            for k in range(1, n + 1):
                acc = acc + dirichlet(k, 5).scale(q.q(n - k))
            assert norlund_kernel(q, n, 5) == acc.scale(1 / q.Q(n))


def test_norlund_mass_all_families():
    for q in (FEJER, CESARO, LOG):
        for n in list(range(1, 129)) + [200, 517, 1024]:
            N = max((n - 1).bit_length(), 1)
            assert norlund_kernel(q, n, N).integrate() == 1


def test_norlund_real_family_mass():
    q = make_family("power", alpha=F(1, 3))
    k = norlund_kernel(q, 9, 4)
    assert abs(k.integrate() - 1) < 10**-40


def test_shift_form_examples():
    assert fejer_shift_form(0, 2) == StepFunction.constant(1, 2)
    assert list(fejer_shift_form(1, 2).values) == [F(3, 2), F(3, 2), F(1, 2), F(1, 2)]


def test_shift_form_equals_fejer():
    for n in range(9):
        assert fejer_shift_form(n, 9) == fejer(1 << n, 9)


def test_decomposition_closure_small_exhaustive():
    for q in (FEJER, CESARO, LOG, GEOMETRIC):
        for n in range(1, 32):
            dec = decompose_kernel(q, n, 6)
            r1, r2 = dec.closure_residuals()
            assert r1.is_zero() and r2.is_zero()


def test_decomposition_whole_matches_kernel():
    dec = decompose_kernel(FEJER, 13, 6)
    assert dec.whole == fejer(13, 6)
    dec = decompose_kernel(CESARO, 37, 7)
    assert dec.whole == norlund_kernel(CESARO, 37, 7)


def test_decomposition_single_bit():
    # one inner sum only: part1 collapses to the block Dirichlet kernel
    dec = decompose_kernel(FEJER, 16, 6)
    assert dec.part1 == dirichlet(16, 6)
    r1, r2 = dec.closure_residuals()
    assert r1.is_zero() and r2.is_zero()


def test_decomposition_guards():
    with pytest.raises(ValueError):
        decompose_kernel(FEJER, 64, 6)  # factors need n < 2^N
    with pytest.raises(ValueError):
        decompose_kernel(make_family("power", alpha=F(1, 3)), 5, 4)


def test_kernel_sup_small():
    sup, integral = kernel_sup(0, 1)
    assert list(sup.values) == [1] and integral == 1
    sup, integral = kernel_sup(1, 1)
    assert list(sup.values) == [3, 1] and integral == 2


def test_kernel_sup_matches_bruteforce():
    N = 4
    best = StepFunction.constant(0, N)
    for n in range(1, (1 << N) + 1):
        best = best.max_with(abs(fejer(n, N).scale(n)))
    sup, integral = kernel_sup(N, 1)
    assert sup == best
    assert integral == best.integrate()


def test_kernel_sup_exponent_guard():
    with pytest.raises(ValueError):
        kernel_sup(3, F(1, 2))
    with pytest.raises(ValueError):
        kernel_sup(3, 2)


def test_fejer_l1_norms_small():
    norms = fejer_l1_norms(8)
    assert norms[:3] == [1, 1, 1]
    for n in (4, 5, 6, 7, 8):
        assert norms[n - 1] == fejer(n, 3).integrate(absolute=True)


def test_fejer_l1_bound_first_512():
    assert max(fejer_l1_norms(512)) <= F(17, 15)


def test_pointwise_domination_constant_measured():
    # n|K_n| <= c * sum_{s<=|n|} 2^s K_{2^s}: smallest admissible c over
    # n <= 2^6, identical at two resolutions since all cells are exact.
    def measure(N):
        doms = {}
        for s in range(7):
            doms[s] = fejer(1 << s, N).scale(1 << s)
        best = F(0)
        for n in range(1, 65):
            top = n.bit_length() - 1
            denom = StepFunction.constant(0, N)
            for s in range(top + 1):
                denom = denom + doms[s]
            num = abs(fejer(n, N).scale(n))
            best = max(best, max(a / b for a, b in zip(num.values, denom.values)))
        return best
    c7 = measure(7)
    c8 = measure(8)
    assert c7 == c8
    assert 0 < c7 < 100

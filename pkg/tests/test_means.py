"""Partial sums, convolution (against the definitional xor-sum), Norlund
means (dual-route), and maximal means."""

import random
from fractions import Fraction as F

import pytest

from walshnorlund import _core
from walshnorlund.kernels import dirichlet, fejer, norlund_kernel
from walshnorlund.means import (convolve, convolve_direct, fejer_mean, maximal_mean,
                                multiplier_mean, norlund_mean, partial_sum)
from walshnorlund.stepfunc import StepFunction, walsh_function
from walshnorlund.weights import make_family

FEJER = make_family("fejer")
CESARO = make_family("cesaro", alpha=F(1, 2))
LOG = make_family("logarithmic")


def random_rational(rng, N):
    return StepFunction.from_values(
        [F(rng.randrange(-20, 21), rng.choice((1, 2, 8))) for _ in range(1 << N)], N)


def test_partial_sum_full_degree_identity():
    rng = random.Random(1)
    f = random_rational(rng, 5)
    assert partial_sum(f, f.size) == f
    assert partial_sum(f, 0).is_zero()


def test_partial_sum_of_dirichlet():
    for k in (1, 3, 8, 12):
        for m in (2, 5, 9, 16):
            assert partial_sum(dirichlet(m, 5), k) == dirichlet(min(k, m), 5)


def test_partial_sum_of_hardy_block():
    # block function D_{2^(t+1)} - D_{2^t}: partial sums below 2^t vanish,
    # between they are D_k - D_{2^t}
    t = 3
    res = t + 2
    f = dirichlet(1 << (t + 1), res) - dirichlet(1 << t, res)
    for k in range(1, (1 << t) + 1):
        assert partial_sum(f, k).is_zero()
    for k in range((1 << t) + 1, (1 << (t + 1)) + 1):
        assert partial_sum(f, k) == dirichlet(k, res) - dirichlet(1 << t, res)


def test_convolve_unit():
    rng = random.Random(2)
    f = random_rational(rng, 4)
    assert convolve(f, dirichlet(16, 4)) == f
    for n in (1, 2, 3):
        assert convolve(f, dirichlet(1 << n, 4)) == partial_sum(f, 1 << n)


def test_convolve_idempotent_characters():
    for k in (0, 1, 5, 12):
        w = walsh_function(k, 4)
        assert convolve(w, w) == w


def test_convolve_matches_direct_definition():
    rng = random.Random(3)
    for N in (1, 2, 3, 4, 5):
        f = random_rational(rng, N)
        g = random_rational(rng, N)
        assert convolve(f, g) == convolve_direct(f, g)
        assert convolve(f, g) == convolve(g, f)


def test_convolve_coefficients_multiply():
    rng = random.Random(4)
    f = random_rational(rng, 4)
    g = random_rational(rng, 4)
    cf = f.walsh_coefficients()
    cg = g.walsh_coefficients()
    assert convolve(f, g).walsh_coefficients() == tuple(a * b for a, b in zip(cf, cg))


def test_norlund_mean_reductions():
    rng = random.Random(5)
    f = random_rational(rng, 4)
    for n in (1, 2, 5, 11, 16):
        assert norlund_mean(FEJER, n, f) == fejer_mean(n, f)
    one = StepFunction.constant(1, 3)
    for n in (1, 2, 7):
        assert norlund_mean(CESARO, n, one) == one


def test_norlund_mean_against_literal_average():
    rng = random.Random(6)
    f = random_rational(rng, 4)
    for q in (FEJER, CESARO, LOG):
        for n in (1, 2, 3, 9, 16):
            acc = StepFunction.constant(0, 4)
            for k in range(1, n + 1):
                acc = acc + partial_sum(f, k).scale(q.q(n - k))
            assert norlund_mean(q, n, f) == acc.scale(1 / q.Q(n))


def test_multiplier_mean_equals_dual_route():
    rng = random.Random(7)
    for q in (FEJER, CESARO, LOG):
        for N in (2, 4):
            f = random_rational(rng, N)
            for n in (1, 2, 3, (1 << N) - 1, 1 << N):
                assert multiplier_mean(q, n, f) == norlund_mean(q, n, f)


def test_multiplier_mean_real_weights():
    q = make_family("power", alpha=F(1, 3))
    f = dirichlet(7, 3)
    t1 = multiplier_mean(q, 5, f)
    t2 = norlund_mean(q, 5, f)
    assert max(abs(a - b) for a, b in zip(t1.values, t2.values)) < 10**-35


def test_maximal_mean_singleton_and_constant():
    rng = random.Random(8)
    f = random_rational(rng, 4)
    for n in (1, 3, 16):
        assert maximal_mean(FEJER, [n], f) == abs(norlund_mean(FEJER, n, f))
    one = StepFunction.constant(1, 4)
    assert maximal_mean(FEJER, range(1, 17), one) == one


def test_maximal_mean_partition_property():
    rng = random.Random(9)
    f = random_rational(rng, 4)
    full = maximal_mean(CESARO, range(1, 17), f)
    left = maximal_mean(CESARO, range(1, 9), f)
    right = maximal_mean(CESARO, range(9, 17), f)
    assert full == left.max_with(right)
    assert full == maximal_mean(CESARO, list(range(1, 17)) * 2, f)  # duplicates


def test_maximal_mean_object_path_agreement(monkeypatch):
    rng = random.Random(10)
    f = random_rational(rng, 5)
    fast = maximal_mean(FEJER, range(1, 33), f)
    monkeypatch.setattr(_core, "I64_SAFE", 1)  # force the Python-int sweep
    slow = maximal_mean(FEJER, range(1, 33), f)
    assert fast == slow


def test_maximal_mean_matches_per_index_loop():
    rng = random.Random(11)
    f = random_rational(rng, 4)
    ns = [1, 2, 7, 13]
    acc = None
    for n in ns:
        g = abs(multiplier_mean(CESARO, n, f))
        acc = g if acc is None else acc.max_with(g)
    assert maximal_mean(CESARO, ns, f) == acc


def test_shell_values_of_dirichlet():
    # inside the shell I_s \ I_{s+1} every D_j with j <= 2^s equals j
    res = 6
    for s in range(5):
        lo = 1 << (res - s - 1)
        hi = 1 << (res - s)
        for j in (1, (1 << s) - 1, 1 << s):
            if j < 1:
                continue
            d = dirichlet(j, res)
            assert all(d.values[c] == j for c in range(lo, hi))


def test_young_type_bound():
    rng = random.Random(12)
    for q in (FEJER, LOG):
        for _ in range(5):
            f = random_rational(rng, 4)
            n = rng.randrange(1, 17)
            t = norlund_mean(q, n, f)
            bound = f.sup_abs() * norlund_kernel(q, n, 4).integrate(absolute=True)
            assert t.sup_abs() <= bound


def test_mean_guards():
    f = StepFunction.constant(1, 2)
    with pytest.raises(ValueError):
        norlund_mean(FEJER, 0, f)
    with pytest.raises(ValueError):
        norlund_mean(FEJER, 5, f)
    with pytest.raises(ValueError):
        maximal_mean(FEJER, [], f)
    with pytest.raises(ValueError):
        partial_sum(f, 5)

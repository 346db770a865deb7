"""Step-function algebra and the Walsh transform against direct-integration
oracles."""

import random
from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from walshnorlund.dyadic import DyadicInterval, DyadicPoint, walsh_eval
from walshnorlund.scalars import RATIONAL, REAL
from walshnorlund.stepfunc import StepFunction, synthesize, walsh_function


def coefficients_by_integration(f):
    """Oracle: fhat(i) = 2^-N sum_c f[c] w_i(c), straight from the definition."""
    N = f.resolution
    out = []
    for i in range(f.size):
        acc = F(0)
        for c in range(f.size):
            x = DyadicPoint.from_fraction(F(c, f.size))
            acc += f.values[c] * walsh_eval(i, x)
        out.append(acc / f.size)
    return out


def random_rational(rng, N, den=64, lo=-50, hi=50):
    return StepFunction.from_values(
        [F(rng.randrange(lo, hi), rng.choice((1, 2, 4, den))) for _ in range(1 << N)], N)


def test_coefficient_examples():
    assert StepFunction.constant(1, 2).walsh_coefficients() == (1, 0, 0, 0)
    f = StepFunction.from_values([1, -1, -1, 1])
    assert f.walsh_coefficients() == (0, 0, 0, 1)
    d4 = StepFunction.from_values([4, 0, 0, 0])
    assert d4.walsh_coefficients() == (1, 1, 1, 1)


def test_coefficients_match_integration_oracle():
    rng = random.Random(3)
    for N in (0, 1, 2, 3, 4, 5):
        f = random_rational(rng, N)
        assert list(f.walsh_coefficients()) == coefficients_by_integration(f)


def test_synthesis_examples():
    assert StepFunction.from_coefficients([1, 0, 0, 0]) == StepFunction.constant(1, 2)
    assert list(StepFunction.from_coefficients([1, 1, 1, 1]).values) == [4, 0, 0, 0]
    with pytest.raises(ValueError):
        StepFunction.from_coefficients([1, 2, 3])


@settings(max_examples=40)
@given(st.integers(0, 6), st.integers(0, 10_000))
def test_roundtrip_random(N, seed):
    f = random_rational(random.Random(seed), N)
    assert StepFunction.from_coefficients(f.walsh_coefficients()) == f


def test_roundtrip_res12():
    f = random_rational(random.Random(99), 12)
    assert StepFunction.from_coefficients(f.walsh_coefficients()) == f


def test_orthonormality():
    for N in (1, 2, 3, 4, 5, 6):
        for k in range(1 << N):
            coeffs = walsh_function(k, N).walsh_coefficients()
            assert all(c == (1 if i == k else 0) for i, c in enumerate(coeffs))
    coeffs = walsh_function(777, 10).walsh_coefficients()
    assert coeffs[777] == 1 and sum(map(abs, coeffs)) == 1


def test_refinement_preserves_everything():
    rng = random.Random(5)
    f = random_rational(rng, 3)
    g = f.refine(6)
    assert g.integrate() == f.integrate()
    assert g.integrate(absolute=True) == f.integrate(absolute=True)
    fine = g.walsh_coefficients()
    coarse = f.walsh_coefficients()
    assert fine[:f.size] == coarse and all(c == 0 for c in fine[f.size:])
    region = DyadicInterval(2, 2)
    assert g.integrate(region) == f.integrate(region)
    assert g == f


def test_integrate_regions():
    d4 = StepFunction.from_values([4, 0, 0, 0])
    assert d4.integrate() == 1
    assert d4.integrate(DyadicInterval.base(2)) == 1
    assert d4.integrate(DyadicInterval.base(2, complement=True)) == 0
    # region finer than the resolution forces refinement
    assert d4.integrate(DyadicInterval.base(4)) == F(1, 4) * 4 * F(1, 4)
    f = StepFunction.from_values([2, F(4, 3), F(2, 3), 0])
    assert f.integrate() == 1


def test_pointwise_algebra_matches_fractions():
    rng = random.Random(11)
    a = random_rational(rng, 4)
    b = random_rational(rng, 4)
    assert [x + y for x, y in zip(a.values, b.values)] == list((a + b).values)
    assert [x - y for x, y in zip(a.values, b.values)] == list((a - b).values)
    assert [x * y for x, y in zip(a.values, b.values)] == list(a.mul(b).values)
    assert [max(x, y) for x, y in zip(a.values, b.values)] == list(a.max_with(b).values)
    assert [abs(x) for x in a.values] == list(abs(a).values)
    assert [x * F(3, 7) for x in a.values] == list(a.scale(F(3, 7)).values)
    c = random_rational(rng, 2)
    assert (a + c.refine(4)) == (a + c)  # auto-refining add


def test_value_at():
    f = StepFunction.from_values([1, 2, 3, 4])
    assert f.value_at(F(0)) == 1
    assert f.value_at(F(1, 4)) == 2
    assert f.value_at(F(7, 8)) == 4
    assert f.value_at(DyadicPoint.from_fraction(F(1, 2))) == 3


def test_backend_promotion_marks_result():
    a = StepFunction.constant(1, 2)
    b = a.to_real()
    assert b.backend == REAL and b.promoted
    c = a + b
    assert c.backend == REAL and c.promoted
    assert a.backend == RATIONAL and not a.promoted


def test_serialization_roundtrip_bit_exact(tmp_path):
    rng = random.Random(21)
    f = random_rational(rng, 5, den=97, lo=-10**12, hi=10**12)
    path = tmp_path / "f.txt"
    f.save_text(path)
    g = StepFunction.load_text(path)
    assert g == f and g.values == f.values
    assert g.resolution == f.resolution and g.backend == RATIONAL


def test_serialization_real_backend(tmp_path):
    f = StepFunction.constant(1, 2).to_real()
    path = tmp_path / "r.txt"
    f.save_text(path)
    g = StepFunction.load_text(path)
    assert g.backend == REAL
    assert all(abs(x - y) < mpmath.mpf("1e-40") for x, y in zip(f.values, g.values))


def test_synthesize_scaled():
    f = synthesize([3, 1], 2, 2)  # (3 w_0 + w_1)/2
    assert list(f.values) == [2, 2, 1, 1]


def test_walsh_function_errors():
    with pytest.raises(ValueError):
        walsh_function(4, 2)

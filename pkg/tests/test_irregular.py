import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import branch_value, close_cyclic, s0_lifts as sampled_s0
from stokes_fourier.errors import MixedModuli, MixedSlopes, OnBoundary, SlopeNotGreaterThanOne
from stokes_fourier.irregular import (
    ExponentCircle,
    IrregularClass,
    Modulus,
    distinguished_intervals,
    interval_containing,
    s0_lifts,
    s0_points,
    validate_assumption,
)

SLOPES = [F(3, 2), F(2), F(5, 2), F(5, 3), F(3), F(7, 3), F(7, 4)]
HALF_GAUSS = ExponentCircle(0, 2, F(1, 2))


def random_circle(rng: random.Random) -> ExponentCircle:
    return ExponentCircle(F(rng.randrange(48), 48), rng.choice(SLOPES), F(rng.randint(1, 5), rng.randint(1, 5)))


def test_assumption_examples():
    validate_assumption(IrregularClass.of([HALF_GAUSS, ExponentCircle(F(1, 8), 2, F(1, 2))]))
    validate_assumption(IrregularClass.of([ExponentCircle(0, 3, F(1, 3))]))
    with pytest.raises(MixedSlopes):
        validate_assumption(IrregularClass.of([ExponentCircle(0, 2), ExponentCircle(0, 3)]))
    with pytest.raises(MixedModuli):
        validate_assumption(IrregularClass.of([ExponentCircle(0, 2, 1), ExponentCircle(F(1, 4), 2, 2)]))
    with pytest.raises(SlopeNotGreaterThanOne):
        validate_assumption(IrregularClass.of([ExponentCircle(0, F(1, 2))]))


def test_s0_gaussian_against_sampling():
    assert s0_lifts(HALF_GAUSS) == [F(1, 8), F(3, 8), F(5, 8), F(7, 8)]
    assert close_cyclic(s0_lifts(HALF_GAUSS), sampled_s0(HALF_GAUSS), 1)


@pytest.mark.parametrize("slope, count", [(3, 6), (F(5, 3), 10), (F(5, 2), 10)])
def test_s0_counts(slope, count):
    c = ExponentCircle(0, slope)
    assert len(s0_points(c)) == count
    assert len(distinguished_intervals(c)) == count


def test_s0_random_circles_against_sampling():
    rng = random.Random(7)
    for _ in range(10):
        c = random_circle(rng)
        exact = s0_lifts(c)
        assert len(exact) == 2 * c.irregularity
        assert close_cyclic(exact, sampled_s0(c), c.ramification)


def test_gaussian_interval_signs():
    ivs = distinguished_intervals(HALF_GAUSS)
    assert [iv.sign for iv in ivs] == [1, -1, 1, -1]
    assert ivs[0].contains(0)


def test_interval_containing():
    iv = interval_containing(HALF_GAUSS, F(0))
    assert (iv.lo, iv.hi, iv.sign) == (F(7, 8), F(9, 8), 1)
    iv = interval_containing(HALF_GAUSS, F(1, 4))
    assert (iv.lo, iv.hi, iv.sign) == (F(1, 8), F(3, 8), -1)
    with pytest.raises(OnBoundary):
        interval_containing(HALF_GAUSS, F(1, 8))


@given(st.sampled_from(SLOPES), st.integers(0, 47))
def test_interval_invariants(slope, arg):
    c = ExponentCircle(F(arg, 48), slope)
    ivs = distinguished_intervals(c)
    s, r = c.irregularity, c.ramification
    assert len(ivs) == 2 * s
    assert sum(iv.sign > 0 for iv in ivs) == s
    for a, b in zip(ivs, ivs[1:] + ivs[:1]):
        assert a.sign == -b.sign
        assert a.length == F(r, 2 * s) < F(1, 2)
        assert (a.hi - b.lo) % r == 0
    assert sum(iv.length for iv in ivs) == r
    assert [iv.index for iv in ivs] == list(range(2 * s))


@given(st.sampled_from(SLOPES), st.integers(0, 47))
def test_interval_sign_matches_real_part(slope, arg):
    c = ExponentCircle(F(arg, 48), slope)
    for iv in distinguished_intervals(c):
        value = branch_value(c, float(iv.midpoint.lift)).real
        assert (value > 0) == (iv.sign > 0)


def test_modulus_exact_arithmetic():
    m = Modulus.of(F(1, 2))
    assert m.is_rational() and m.as_fraction() == F(1, 2)
    root = Modulus.of(2) ** F(1, 3)
    assert not root.is_rational()
    assert (root ** 3).as_fraction() == 2
    assert math.isclose(float(root * 5), 5 * 2 ** (1 / 3))
    assert isinstance(float(Modulus.of(1)), float)
    for text in ["1/2", "2^(1/3)*3^(-1/2)", "7"]:
        assert str(Modulus.parse(text)) == text


@given(st.fractions(min_value=F(1, 30), max_value=50, max_denominator=30), st.fractions(-3, 3, max_denominator=6))
def test_modulus_round_trip(q, e):
    m = Modulus.of(q) ** e
    assert Modulus.parse(str(m)) == m
    assert math.isclose(float(m), float(q) ** float(e), rel_tol=1e-9)


def test_germ_key_identifies_branches():
    a = ExponentCircle(0, F(5, 3))
    b = ExponentCircle(F(1, 3), F(5, 3))
    assert a.germ_key() == b.germ_key()
    assert a.germ_key() != ExponentCircle(F(1, 6), F(5, 3)).germ_key()

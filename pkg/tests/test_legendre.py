import cmath
import math
import random
from fractions import Fraction as F

from hypothesis import given
from hypothesis import strategies as st

from oracles import TURN, branch_value, close_cyclic
from oracles import s0_lifts as sampled_s0_lifts
from stokes_fourier.examples import gaussian
from stokes_fourier.irregular import ExponentCircle, IrregularClass, Modulus, distinguished_intervals, s0_lifts
from stokes_fourier.legendre import (
    formal_transform,
    legendre_circle,
    legendre_class,
    legendre_interval,
    legendre_interval_inverse,
    legendre_point,
    legendre_point_inverse,
)
from stokes_fourier.circle_arith import CoverPoint
from stokes_fourier.representation import formal_system, new_template
from stokes_fourier.sampling import random_class, random_generic_direction, random_valid_rep

SLOPES = [F(3, 2), F(2), F(5, 2), F(5, 3), F(3), F(7, 4), F(4, 3)]

circles = st.builds(
    ExponentCircle,
    st.fractions(min_value=0, max_value=F(47, 48), max_denominator=48),
    st.sampled_from(SLOPES),
    st.sampled_from([Modulus.of(1), Modulus.of(2), Modulus.of(F(1, 3))]),
)


def test_target_slope_and_ramification():
    for k, k_hat, r_hat in [(F(2), F(2), 1), (F(3), F(3, 2), 2), (F(5, 3), F(5, 2), 2), (F(3, 2), F(3), 1)]:
        target, _ = legendre_circle(ExponentCircle(0, k))
        assert (target.slope, target.ramification) == (k_hat, r_hat)
        assert target.irregularity == k.numerator


def test_known_targets():
    target, _ = legendre_circle(ExponentCircle(0, 3, F(1, 3)))
    # -2/3 w^(3/2): argument 1/2 reduces to 0 modulo 1/2 since the target has two sheets
    assert target.coeff_arg == 0 and target.slope == F(3, 2)
    assert target.coeff_modulus == Modulus.of(F(2, 3))
    target, _ = legendre_circle(ExponentCircle(0, 2, F(1, 2)))
    assert target.slope == 2 and float(target.coeff_modulus) == 0.5


@given(circles, st.floats(0, 1))
def test_point_map_against_complex_oracle(c, u):
    """w = q'(z) lies on the image sheet and g = q - z w is the target exponent there."""
    target, m = legendre_circle(c)
    k = float(c.slope)
    lam = F(round(u * c.ramification * 997), 997)
    radius = 1.7
    a = float(c.coeff_modulus) * cmath.exp(1j * TURN * float(c.coeff_arg))
    z_pow_k1 = radius ** (k - 1) * cmath.exp(-1j * TURN * (k - 1) * float(lam))
    w = k * a * z_pow_k1
    g = (1 - k) * branch_value(c, float(lam), radius)
    lam_hat = m.lift(lam)
    turns = (-cmath.phase(w) / TURN - float(lam_hat)) % 1
    assert min(turns, 1 - turns) < 1e-9
    want = branch_value(target, float(lam_hat), abs(w))
    assert abs(want - g) < 1e-9 * max(1, abs(g))


@given(circles)
def test_distinguished_points_correspond(c):
    target, m = legendre_circle(c)
    images = [m.lift(p) for p in s0_lifts(c)]
    assert sorted(images) == s0_lifts(target)
    assert close_cyclic(images, sampled_s0_lifts(target), target.ramification)


@given(circles)
def test_interval_map_is_bijective_and_swaps_signs(c):
    target, m = legendre_circle(c)
    src = distinguished_intervals(c)
    images = [legendre_interval(m, iv) for iv in src]
    assert sorted(iv.index for iv in images) == list(range(len(src)))
    for iv, im in zip(src, images):
        assert im.sign == -iv.sign
        assert legendre_interval_inverse(m, im) == iv


@given(circles, st.integers(0, 10**6))
def test_point_inverse_round_trip(c, seed):
    rng = random.Random(seed)
    _, m = legendre_circle(c, 0)
    for _ in range(5):
        p = CoverPoint(0, F(rng.randrange(720 * c.ramification), 720), c.ramification)
        assert legendre_point_inverse(m, legendre_point(m, p)) == p
    lam_hat = F(rng.randrange(720 * m.target.ramification), 720)
    q = CoverPoint(0, lam_hat, m.target.ramification)
    assert legendre_point(m, legendre_point_inverse(m, q)) == q


def test_multiplicities_preserved():
    theta = IrregularClass(((ExponentCircle(0, 2), 2), (ExponentCircle(F(1, 8), 2), 1)))
    hat, maps = legendre_class(theta)
    assert hat.multiplicities == [2, 1]
    assert [m.circle_id for m in maps] == [0, 1]


@given(st.integers(0, 10**6))
def test_sign_product_per_circle(seed):
    rng = random.Random(seed)
    theta = random_class(rng)
    hat, maps = legendre_class(theta)
    rep = new_template(theta, random_generic_direction(theta, rng))
    ft = formal_transform(formal_system(rep), hat, maps)
    for cid, c in enumerate(theta.circles):
        signs = [s for (i, _), s in ft.signs.items() if i == cid]
        assert len(signs) == 2 * c.irregularity
        assert signs.count(-1) == c.irregularity
        assert ft.sign_product(cid) == (-1) ** c.irregularity


def test_transformed_gluings_are_signed_source_gluings():
    rep = gaussian().source
    hat, maps = legendre_class(rep.theta)
    src = formal_system(rep)
    ft = formal_transform(src, hat, maps)
    for cid, m in enumerate(maps):
        for p in s0_lifts(m.source):
            p_hat = m.lift(p)
            assert ft.system.gluing(cid, p_hat) == src.gluing(cid, p).scale(ft.signs[(cid, p_hat)])


def test_transformed_system_rank_and_monodromy_determinant():
    rng = random.Random(3)
    for _ in range(10):
        theta = random_class(rng)
        base = random_generic_direction(theta, rng)
        rep = random_valid_rep(theta, base, rng)
        hat, maps = legendre_class(theta)
        ft = formal_transform(formal_system(rep), hat, maps)
        assert hat.rank == sum(c.irregularity - c.ramification for c in theta.circles)
        assert math.prod(ft.sign_product(i) for i in range(len(maps))) == (-1) ** sum(
            c.irregularity for c in theta.circles)

import random
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import branch_value, close_sets, dedupe, singular_events, stokes_direction_values
from stokes_fourier.circle_arith import CoverPoint, frac_mod
from stokes_fourier.errors import NotSingular, SameExponent
from stokes_fourier.irregular import ExponentCircle, IrregularClass
from stokes_fourier.legendre import legendre_class
from stokes_fourier.sampling import random_class, random_generic_direction
from stokes_fourier.stokes_geometry import (
    Dominance,
    descending_order,
    dominance,
    fiber,
    is_generic,
    singular_directions,
    stokes_arrows,
    stokes_directions,
    stokes_group_pattern,
    stokes_path,
)

GAUSS = IrregularClass.of([ExponentCircle(0, 2, F(1, 2)), ExponentCircle(F(1, 8), 2, F(1, 2))])
PLUS_MINUS = IrregularClass.of([ExponentCircle(0, 2), ExponentCircle(F(1, 2), 2)])
FIVE_THIRDS = IrregularClass.of([ExponentCircle(0, F(5, 3))])
FIVE_HALVES = IrregularClass.of([ExponentCircle(0, F(5, 2))])
CUBIC = IrregularClass.of([ExponentCircle(0, 3, F(1, 3))])


def small_classes(count: int, seed: int, max_branches: int = 6):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        theta = random_class(rng)
        if sum(c.ramification for c in theta.circles) <= max_branches:
            out.append(theta)
    return out


@pytest.mark.parametrize("theta, dirs, arrows", [(GAUSS, 4, 4), (FIVE_THIRDS, 10, 10), (FIVE_HALVES, 5, 5)])
def test_counts(theta, dirs, arrows):
    assert len(singular_directions(theta)) == dirs
    assert len(stokes_arrows(theta)) == arrows


def test_airy_target_has_three_arrows():
    theta_hat, _ = legendre_class(CUBIC)
    assert len(stokes_arrows(theta_hat)) == 3
    assert stokes_arrows(CUBIC) == []


def _arrow_events(theta):
    return [(float(a.direction), (a.target_point.circle_id, float(a.target_point.lift)),
             (a.source_point.circle_id, float(a.source_point.lift))) for a in stokes_arrows(theta)]


def _same_point(theta, p, q) -> bool:
    if p[0] != q[0]:
        return False
    r = theta.circles[p[0]].ramification
    gap = abs(p[1] - q[1]) % r
    return min(gap, r - gap) < 1e-6


@pytest.mark.parametrize("theta", [GAUSS, FIVE_THIRDS, FIVE_HALVES, PLUS_MINUS] + small_classes(4, 3))
def test_arrows_match_sampled_negative_real_differences(theta):
    sampled = singular_events(theta)
    exact = _arrow_events(theta)
    assert len(sampled) == len(exact)
    pool = list(sampled)
    for d1, lo1, up1 in exact:
        match = [e for e in pool if min(abs(d1 - e[0]), 1 - abs(d1 - e[0])) < 1e-6
                 and _same_point(theta, e[1], lo1) and _same_point(theta, e[2], up1)]
        assert len(match) == 1
        pool.remove(match[0])
    assert close_sets(singular_directions(theta), dedupe([e[0] for e in sampled]))


@pytest.mark.parametrize("theta", [GAUSS, FIVE_THIRDS, PLUS_MINUS] + small_classes(3, 5))
def test_stokes_directions_match_sampling(theta):
    assert close_sets(stokes_directions(theta), dedupe(stokes_direction_values(theta)))


def test_stokes_directions_examples():
    assert stokes_directions(PLUS_MINUS) == [F(1, 8), F(3, 8), F(5, 8), F(7, 8)]
    assert stokes_directions(IrregularClass.of([ExponentCircle(0, 3)])) == []
    assert len(stokes_directions(FIVE_THIRDS)) == 10


def test_dominance_plus_minus_at_zero():
    plus, minus = CoverPoint(0, F(0)), CoverPoint(1, F(0))
    assert dominance(PLUS_MINUS, minus, plus, 0) is Dominance.LESS
    assert dominance(PLUS_MINUS, plus, minus, 0) is Dominance.GREATER
    (arrow,) = [a for a in stokes_arrows(PLUS_MINUS) if a.direction == 0]
    assert (arrow.source_point, arrow.target_point) == (plus, minus)


def test_dominance_same_exponent():
    theta = IrregularClass.of([ExponentCircle(0, 2), ExponentCircle(0, 2)])
    with pytest.raises(SameExponent):
        dominance(theta, CoverPoint(0, F(0)), CoverPoint(1, F(0)))


def test_gaussian_one_comparable_pair_per_singular_direction():
    for d in singular_directions(GAUSS):
        pts = fiber(GAUSS, d)
        comparable = [(i, j) for i in pts for j in pts if i != j and dominance(GAUSS, i, j, d) is Dominance.LESS]
        assert len(comparable) == 1


@given(st.integers(0, 10**6))
def test_dominance_antisymmetric(seed):
    rng = random.Random(seed)
    theta = small_classes(1, seed)[0]
    d = F(rng.randrange(720), 720)
    pts = fiber(theta, d)
    for i in pts:
        for j in pts:
            if i == j:
                continue
            a, b = dominance(theta, i, j, d), dominance(theta, j, i, d)
            assert {a, b} in ({Dominance.INCOMPARABLE}, {Dominance.LESS, Dominance.GREATER})
            if a is Dominance.LESS:
                assert d in singular_directions(theta)


def test_descending_order_matches_real_parts():
    rng = random.Random(11)
    for theta in small_classes(8, 13):
        d = random_generic_direction(theta, rng)
        order = descending_order(theta, d)
        values = [branch_value(theta.circles[p.circle_id], float(p.lift)).real for p in order]
        assert values == sorted(values, reverse=True)


def test_patterns():
    d1 = singular_directions(GAUSS)[0]
    pat = stokes_group_pattern(GAUSS, d1)
    assert len(pat.allowed_blocks) == 1 and pat.is_acyclic()
    with pytest.raises(NotSingular):
        stokes_group_pattern(GAUSS, F(1, 3))
    for theta in small_classes(10, 17, 9):
        for d in singular_directions(theta):
            pat = stokes_group_pattern(theta, d)
            assert pat.is_acyclic()
            assert all(t != s for t, s in pat.allowed_blocks)
            assert not any((s, t) in pat.allowed_blocks for t, s in pat.allowed_blocks)


def _overlap_midpoint_ok(arrow) -> bool:
    d = arrow.direction
    ivs = [arrow.source, arrow.target]
    lo_gaps = [frac_mod(d - iv.start.projection) for iv in ivs]
    hi_gaps = [frac_mod(iv.end.projection - d) for iv in ivs]
    inside = all(0 < g < iv.length for g, iv in zip(lo_gaps, ivs))
    return inside and min(lo_gaps) == min(hi_gaps)


def test_arrow_direction_is_overlap_midpoint():
    for theta in [GAUSS, FIVE_THIRDS, FIVE_HALVES] + small_classes(10, 19, 9):
        for a in stokes_arrows(theta):
            assert _overlap_midpoint_ok(a)
            assert a.source.sign > 0 > a.target.sign
            assert a.source.contains(a.source_point.lift) and a.target.contains(a.target_point.lift)
            assert a.source_point.projection == a.target_point.projection == a.direction
        assert sorted({a.direction for a in stokes_arrows(theta)}) == singular_directions(theta)


def test_gaussian_paths_cross_one_puncture():
    for a in stokes_arrows(GAUSS):
        path = stokes_path(GAUSS, a)
        assert [d for d, _ in path.crossed] == [a.direction]
        assert {path.start_mid.circle_id, path.end_mid.circle_id} == {0, 1}


def test_airy_target_paths_are_closed():
    theta_hat, _ = legendre_class(CUBIC)
    for a in stokes_arrows(theta_hat):
        path = stokes_path(theta_hat, a)
        assert path.start_mid.projection == path.end_mid.projection
        assert path.route == 0
        assert [d for d, _ in path.crossed] == [a.direction]


def test_coinciding_projections_cross_own_direction_only():
    seen = 0
    for theta in [FIVE_THIRDS, FIVE_HALVES] + small_classes(20, 23, 9):
        for a in stokes_arrows(theta):
            if a.source.start.projection == a.target.start.projection:
                seen += 1
                assert [d for d, _ in stokes_path(theta, a).crossed] == [a.direction]
    assert seen > 0


def test_generic_excludes_special_directions():
    for d in singular_directions(GAUSS) + stokes_directions(GAUSS):
        assert not is_generic(GAUSS, d)
    assert is_generic(GAUSS, F(3, 4))

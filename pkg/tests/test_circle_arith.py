from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from stokes_fourier.circle_arith import (
    CoverPoint,
    angle_normalize,
    cover_lifts,
    crossed_points,
    crossing_count,
    deck,
    positive_arc,
    signed_offset,
)
from stokes_fourier.irregular import ExponentCircle

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=60)
angles = st.fractions(min_value=0, max_value=1, max_denominator=60).filter(lambda x: x < 1)


@pytest.mark.parametrize("q, expected", [(F(9, 8), F(1, 8)), (F(-1, 4), F(3, 4)), (0, 0), (7, 0)])
def test_angle_normalize(q, expected):
    assert angle_normalize(q) == expected


@given(rationals)
def test_angle_normalize_range(q):
    a = angle_normalize(q)
    assert 0 <= a < 1
    assert (a - q).denominator == 1


@pytest.mark.parametrize("x, y, length", [(0, F(1, 4), F(1, 4)), (F(3, 4), F(1, 4), F(1, 2)),
                                          (F(1, 8), F(1, 8), 1)])
def test_positive_arc_lengths(x, y, length):
    arc = positive_arc(x, y)
    assert arc.length == length


def test_positive_arc_crossing_zero():
    arc = positive_arc(F(3, 4), F(1, 4))
    assert arc.contains(0) and arc.contains(F(1, 4)) and not arc.contains(F(3, 4))


@given(angles, angles)
def test_positive_arc_lengths_complement(x, y):
    if x != y:
        assert positive_arc(x, y).length + positive_arc(y, x).length == 1


@given(angles, angles)
def test_signed_offset(x, y):
    off = signed_offset(x, y)
    assert -F(1, 2) < off <= F(1, 2)
    assert angle_normalize(x + off) == y


def test_signed_offset_half_turn_goes_positive():
    assert signed_offset(F(1, 4), F(3, 4)) == F(1, 2)
    assert signed_offset(F(3, 4), F(1, 4)) == F(1, 2)


def test_crossing_count():
    assert crossing_count(0, 1, F(1, 2), 1) == 1
    assert crossing_count(0, 2, F(1, 2), 1) == 2
    assert crossing_count(F(1, 2), 1, F(1, 2), 1) == 0


@pytest.mark.parametrize("slope, d, lifts", [(F(5, 3), 0, [0, 1, 2]), (2, F(1, 8), [F(1, 8)]),
                                             (F(5, 2), F(1, 2), [F(1, 2), F(3, 2)])])
def test_cover_lifts(slope, d, lifts):
    got = cover_lifts(ExponentCircle(0, slope), d)
    assert [p.lift for p in got] == lifts


@pytest.mark.parametrize("r, lift, image", [(3, 0, 1), (3, 2, 0), (1, 0, 0)])
def test_deck(r, lift, image):
    assert deck(CoverPoint(0, F(lift), r)).lift == image


@given(st.integers(1, 6), st.fractions(min_value=0, max_value=6, max_denominator=30))
def test_deck_period_and_lifts(r, lift):
    p = CoverPoint(0, lift, r)
    q = p
    for _ in range(r):
        q = deck(q)
    assert q == p
    assert p in cover_lifts(r, p.projection)
    assert 0 <= p.lift < r


def test_crossed_points_sides():
    pts = [F(0), F(1, 4), F(1, 2)]
    # strictly inside
    assert [i for _, i in crossed_points(F(1, 8), F(1, 4), pts)] == [1]
    # endpoint on a point: side decides
    assert [i for _, i in crossed_points(0, F(1, 4), pts, -1, 0)] == [0]
    assert [i for _, i in crossed_points(0, F(1, 4), pts, -1, 1)] == [0, 1]
    assert [i for _, i in crossed_points(0, F(1, 4), pts, 1, 0)] == []
    assert [i for _, i in crossed_points(0, F(1, 4), pts, 1, 1)] == [1]
    assert [i for _, i in crossed_points(0, F(1, 4), pts, 1, -1)] == []
    # negative route, traversal order
    assert [i for _, i in crossed_points(F(5, 8), F(-1, 2), pts)] == [2, 1]
    # full turn meets everything once
    assert sorted(i for _, i in crossed_points(F(1, 8), 1, pts)) == [0, 1, 2]

"""Exact arithmetic on the circle of directions and on its finite covers.

Directions are rational numbers of turns in [0, 1), measured in the
positive sense of the chart t = 1/z at infinity.  In the z-chart that is
clockwise, so a direction of z-argument theta (turns) is the angle -theta.

A point of an r-sheeted cover is stored by its lift parameter in [0, r);
its projection is the lift reduced mod 1 and the deck transformation adds
one turn.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Rational = Union[int, Fraction]
Angle = Fraction

ONE = Fraction(1)
HALF = Fraction(1, 2)


def frac_mod(x: Rational, m: Rational = 1) -> Fraction:
    """Representative of x modulo m in [0, m)."""
    x = Fraction(x)
    m = Fraction(m)
    return x - math.floor(x / m) * m


def angle_normalize(q: Rational) -> Angle:
    """Reduce a rational number of turns into [0, 1)."""
    return frac_mod(q, 1)


def signed_offset(x: Rational, y: Rational) -> Fraction:
    """Shortest signed rotation taking x to y, in (-1/2, 1/2].

    An exact half-turn resolves to +1/2, i.e. the positive route.
    """
    off = frac_mod(Fraction(y) - Fraction(x))
    return off - 1 if off > HALF else off


def crossing_count(a: Rational, b: Rational, point: Rational, period: Rational) -> int:
    """Number of elements of point + period*Z inside the half-open range (a, b]."""
    a, b, point, period = (Fraction(v) for v in (a, b, point, period))
    return math.floor((b - point) / period) - math.floor((a - point) / period)


@dataclass(frozen=True)
class Arc:
    """The arc (start, end] traversed positively; length 1 means a full turn."""

    start: Angle
    end: Angle
    length: Fraction

    def contains(self, d: Rational) -> bool:
        off = frac_mod(Fraction(d) - self.start)
        return (0 < off <= self.length) or (off == 0 and self.length == 1)


def positive_arc(x: Rational, y: Rational) -> Arc:
    x = angle_normalize(x)
    y = angle_normalize(y)
    length = frac_mod(y - x) or ONE
    return Arc(x, y, length)


@dataclass(frozen=True, order=True)
class CoverPoint:
    """A point of the r-sheeted cover belonging to circle ``circle_id``."""

    circle_id: int
    lift: Fraction
    ramification: int = 1

    def __post_init__(self) -> None:
        if self.ramification < 1:
            raise ValueError("ramification must be positive")
        object.__setattr__(self, "lift", frac_mod(self.lift, self.ramification))

    @property
    def projection(self) -> Angle:
        return frac_mod(self.lift, 1)

    def shifted(self, delta: Rational) -> "CoverPoint":
        return CoverPoint(self.circle_id, self.lift + Fraction(delta), self.ramification)


def deck(p: CoverPoint) -> CoverPoint:
    """Go once positively around the base circle."""
    return p.shifted(1)


def cover_lifts(circle, d: Rational, circle_id: int = 0) -> list[CoverPoint]:
    """The r lifts of direction d, sorted by lift.

    ``circle`` is a ramification order or anything with a ``ramification``
    attribute.
    """
    ramification = getattr(circle, "ramification", circle)
    d = angle_normalize(d)
    return [CoverPoint(circle_id, d + j, ramification) for j in range(ramification)]


def crossed_points(
    x: Rational,
    route: Rational,
    points: list[Rational],
    x_side: int = 0,
    y_side: int = 0,
) -> list[tuple[Fraction, int]]:
    """Points of the circle met by the route from x of signed length ``route``.

    Returns ``(position, index)`` pairs in traversal order, where position is
    the signed distance from x along the lifted route and index refers into
    ``points``.  A side of -1 (+1) places the endpoint infinitesimally before
    (after) its nominal direction, so points sitting exactly on an endpoint
    are crossed or not according to that side.
    """
    x = Fraction(x)
    route = Fraction(route)
    start = (Fraction(0), x_side)
    stop = (route, y_side)
    lo, hi = min(start, stop), max(start, stop)
    hits = []
    for idx, pt in enumerate(points):
        base = frac_mod(Fraction(pt) - x)
        for m in range(math.floor(lo[0]) - 1, math.ceil(hi[0]) + 2):
            t = base + m
            if lo < (t, 0) < hi:
                hits.append((t, idx))
    hits.sort(reverse=stop < start)
    return hits

"""Dominance, singular directions, Stokes arrows, patterns and Stokes paths.

Equal moduli make every comparison exact: for branches with arguments A and
B (turns), the difference e^{2 pi i A} - e^{2 pi i B} has argument
(A + B)/2 + 1/4, plus a half turn when A - B is not in (0, 1) after reducing
both into [0, 1).
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass
from fractions import Fraction

from .circle_arith import (
    HALF,
    Angle,
    CoverPoint,
    angle_normalize,
    crossed_points,
    frac_mod,
    signed_offset,
)
from .errors import NotSingular, SameExponent
from .irregular import (
    DistinguishedInterval,
    IrregularClass,
    distinguished_intervals,
    real_part_rank,
)

QUARTER = Fraction(1, 4)


class Dominance(enum.Enum):
    LESS = "i<j"
    GREATER = "j<i"
    INCOMPARABLE = "incomparable"


def fiber(theta: IrregularClass, d: Angle) -> list[CoverPoint]:
    """All branch points over direction d, by circle then lift."""
    d = angle_normalize(d)
    return [CoverPoint(cid, d + j, c.ramification)
            for cid, c in enumerate(theta.circles) for j in range(c.ramification)]


def branch_phase(theta: IrregularClass, p: CoverPoint) -> Fraction:
    return theta.circles[p.circle_id].phase(p.lift)


def difference_argument(a: Fraction, b: Fraction) -> Fraction:
    """Argument in turns of e^{2 pi i a} - e^{2 pi i b}, for a != b mod 1."""
    a, b = frac_mod(a), frac_mod(b)
    arg = QUARTER + (a + b) / 2
    if not 0 < a - b < 1:
        arg += HALF
    return frac_mod(arg)


def dominance(theta: IrregularClass, i: CoverPoint, j: CoverPoint, d: Angle | None = None) -> Dominance:
    """Compare two branches over a common direction.

    LESS means q_i - q_j is negative real there, i.e. e^{q_i - q_j} decays
    fastest and an arrow runs from j to i.
    """
    if d is not None and (i.projection != angle_normalize(d) or j.projection != angle_normalize(d)):
        raise ValueError("points must lie over the given direction")
    if i.projection != j.projection:
        raise ValueError("points lie over different directions")
    a, b = branch_phase(theta, i), branch_phase(theta, j)
    if a == b:
        raise SameExponent("branches coincide", i=str(i), j=str(j))
    arg = difference_argument(a, b)
    if arg == HALF:
        return Dominance.LESS
    if arg == 0:
        return Dominance.GREATER
    return Dominance.INCOMPARABLE


def descending_order(theta: IrregularClass, d: Angle) -> list[CoverPoint]:
    """Branches over d from largest to smallest real part."""
    return sorted(fiber(theta, d), key=lambda p: (real_part_rank(branch_phase(theta, p)), p))


@dataclass(frozen=True)
class StokesArrow:
    """Arrow j -> i over ``direction``: source in A+(f), target in A-(g)."""

    source: DistinguishedInterval
    target: DistinguishedInterval
    direction: Angle
    source_point: CoverPoint
    target_point: CoverPoint

    def sort_key(self) -> tuple:
        return (self.direction, self.source.circle_id, self.target.circle_id,
                self.source_point.lift, self.target_point.lift)

    def __str__(self) -> str:
        return f"{self.source.label()} -> {self.target.label()} at {self.direction}"


def _all_intervals(theta: IrregularClass) -> list[DistinguishedInterval]:
    return [iv for cid, c in enumerate(theta.circles) for iv in distinguished_intervals(c, cid)]


def stokes_arrows(theta: IrregularClass) -> list[StokesArrow]:
    """One arrow per pair (I in A+, J in A-) whose projections overlap.

    The direction is the midpoint of the overlap of the projections.
    """
    return list(_arrows(theta))


@functools.lru_cache(maxsize=1024)
def _arrows(theta: IrregularClass) -> tuple[StokesArrow, ...]:
    ivs = _all_intervals(theta)
    out = []
    for iv in ivs:
        if iv.sign < 0:
            continue
        width = Fraction(1, 2) / theta.circles[iv.circle_id].slope
        for jv in ivs:
            if jv.sign > 0:
                continue
            delta = signed_offset(iv.lo, jv.lo)
            if not -width < delta < width:
                continue
            d = angle_normalize(iv.lo + (width + delta) / 2)
            src = iv.start.shifted(frac_mod(d - iv.lo))
            tgt = jv.start.shifted(frac_mod(d - jv.lo))
            out.append(StokesArrow(iv, jv, d, src, tgt))
    out.sort(key=StokesArrow.sort_key)
    return tuple(out)


def singular_directions(theta: IrregularClass) -> list[Angle]:
    return list(_singular(theta))


@functools.lru_cache(maxsize=1024)
def _singular(theta: IrregularClass) -> tuple[Angle, ...]:
    return tuple(sorted({a.direction for a in _arrows(theta)}))


@dataclass(frozen=True)
class StokesGroupPattern:
    direction: Angle
    allowed_blocks: frozenset[tuple[CoverPoint, CoverPoint]]

    def is_acyclic(self) -> bool:
        succ: dict[CoverPoint, set[CoverPoint]] = {}
        for tgt, src in self.allowed_blocks:
            succ.setdefault(src, set()).add(tgt)
        state: dict[CoverPoint, int] = {}

        def visit(v: CoverPoint) -> bool:
            state[v] = 1
            for w in succ.get(v, ()):
                if state.get(w) == 1 or (w not in state and not visit(w)):
                    return False
            state[v] = 2
            return True

        return all(visit(v) for v in list(succ) if v not in state)


def stokes_group_pattern(theta: IrregularClass, d: Angle) -> StokesGroupPattern:
    """Allowed (target, source) pairs of the Stokes factor at d."""
    d = angle_normalize(d)
    blocks = frozenset((a.target_point, a.source_point) for a in stokes_arrows(theta) if a.direction == d)
    if not blocks:
        raise NotSingular(f"{d} is not a singular direction", direction=str(d))
    return StokesGroupPattern(d, blocks)


def stokes_directions(theta: IrregularClass) -> list[Angle]:
    """Directions where the real parts of two distinct branches cross.

    Branches (circle c, sheet m) over d have phase arg(a_c) - k(d + m); real
    parts agree exactly when the two phases sum to 0 mod 1.
    """
    return list(_stokes_dirs(theta))


@functools.lru_cache(maxsize=1024)
def _stokes_dirs(theta: IrregularClass) -> tuple[Angle, ...]:
    k = theta.slope
    branches = [(c, m) for c in theta.circles for m in range(c.ramification)]
    out: set[Fraction] = set()
    for x in range(len(branches)):
        for y in range(x + 1, len(branches)):
            (ci, mi), (cj, mj) = branches[x], branches[y]
            const = ci.coeff_arg + cj.coeff_arg - k * (mi + mj)
            n_max = int(2 * k) + 2
            for n in range(-n_max - int(abs(const)) - 2, n_max + int(abs(const)) + 3):
                d = (const + n) / (2 * k)
                if 0 <= d < 1:
                    out.add(d)
    return tuple(sorted(out))


def special_directions(theta: IrregularClass) -> set[Angle]:
    """Singular directions, Stokes directions and S0 projections."""
    return set(_special(theta))


@functools.lru_cache(maxsize=1024)
def _special(theta: IrregularClass) -> frozenset[Angle]:
    out = set(_singular(theta)) | set(_stokes_dirs(theta))
    for cid, c in enumerate(theta.circles):
        for iv in distinguished_intervals(c, cid):
            out.add(iv.start.projection)
    return frozenset(out)


def is_generic(theta: IrregularClass, d: Angle) -> bool:
    return angle_normalize(d) not in _special(theta)


def endpoint_sides(theta: IrregularClass, x: Angle, y: Angle) -> tuple[int, int]:
    """Start just before a singular x, end just after a singular y."""
    sing = _singular(theta)
    return (-1 if angle_normalize(x) in sing else 0, 1 if angle_normalize(y) in sing else 0)


@dataclass(frozen=True)
class StokesPath:
    """Interior path between interval midpoints, described on the boundary.

    ``route`` is the signed rotation from the start projection to the end
    projection; ``crossed`` lists the singular directions passed, in order,
    with the sign of each crossing.
    """

    arrow: StokesArrow | None
    start_mid: CoverPoint
    end_mid: CoverPoint
    route: Fraction
    start_side: int
    end_side: int
    crossed: tuple[tuple[Angle, int], ...]


def path_between(theta: IrregularClass, start: CoverPoint, end: CoverPoint,
                 route: Fraction | None = None, arrow: StokesArrow | None = None) -> StokesPath:
    x, y = start.projection, end.projection
    if route is None:
        route = signed_offset(x, y)
    xs, ys = endpoint_sides(theta, x, y)
    sing = singular_directions(theta)
    hits = crossed_points(x, route, sing, xs, ys)
    sense = 1 if (route, ys) > (0, xs) else -1
    crossed = tuple((sing[i], sense) for _, i in hits)
    return StokesPath(arrow, start, end, Fraction(route), xs, ys, crossed)


def stokes_path(theta: IrregularClass, arrow: StokesArrow) -> StokesPath:
    """Path from the midpoint of the source interval to that of the target."""
    return path_between(theta, arrow.source.midpoint, arrow.target.midpoint, arrow=arrow)

"""The Legendre transform of exponent circles and of graded local systems.

For q = a z^k put w = q'(z) and g(w) = q(z) - z w = (1 - k) a z^k.  On
lift parameters this is the affine, orientation-preserving map

    lam_hat = (k - 1) * lam - arg(a) + n0   (mod r_hat),

where the integer n0 is fixed by the chosen representative of the target
coefficient.  The target has slope k/(k-1), ramification s - r and the same
irregularity s.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .circle_arith import HALF, CoverPoint, frac_mod
from .irregular import (
    DistinguishedInterval,
    ExponentCircle,
    IrregularClass,
    distinguished_intervals,
    interval_containing,
    s0_lifts,
)
from .representation import FormalSystem


@dataclass(frozen=True)
class LegendreMap:
    source: ExponentCircle
    target: ExponentCircle
    circle_id: int
    shift: int

    @property
    def param_scale(self) -> Fraction:
        return self.source.slope - 1

    @property
    def param_offset(self) -> Fraction:
        return frac_mod(self.shift - self.source.coeff_arg, self.target.ramification)

    def lift(self, lam: Fraction) -> Fraction:
        return frac_mod(self.param_scale * Fraction(lam) + self.param_offset, self.target.ramification)

    def inverse_lift(self, lam_hat: Fraction) -> Fraction:
        r, rh = self.source.ramification, self.target.ramification
        base = (Fraction(lam_hat) - self.param_offset) / self.param_scale
        # The preimage is unique mod r; scanning the r_hat-periodic candidates finds it.
        cands = {frac_mod(base + Fraction(rh * m) / self.param_scale, r) for m in range(r)}
        (lam,) = {c for c in cands if self.lift(c) == frac_mod(lam_hat, rh)}
        return lam


def legendre_circle(c: ExponentCircle, circle_id: int = 0) -> tuple[ExponentCircle, LegendreMap]:
    """Target circle and parameter map; the target argument is reduced mod 1/r_hat."""
    k = c.slope
    k_hat = k / (k - 1)
    r_hat = c.irregularity - c.ramification
    raw = frac_mod(HALF + c.coeff_arg * (1 - k_hat))
    beta = frac_mod(raw, Fraction(1, r_hat))
    shift = next(n for n in range(r_hat) if frac_mod(k_hat * n - (beta - raw)) == 0)
    modulus = (k - 1) * c.coeff_modulus * ((c.coeff_modulus * k) ** (-k_hat))
    target = ExponentCircle(beta, k_hat, modulus)
    return target, LegendreMap(c, target, circle_id, shift)


def legendre_point(m: LegendreMap, p: CoverPoint) -> CoverPoint:
    return CoverPoint(p.circle_id, m.lift(p.lift), m.target.ramification)


def legendre_point_inverse(m: LegendreMap, p: CoverPoint) -> CoverPoint:
    return CoverPoint(p.circle_id, m.inverse_lift(p.lift), m.source.ramification)


def legendre_interval(m: LegendreMap, iv: DistinguishedInterval) -> DistinguishedInterval:
    """Image interval; growth and decay are exchanged."""
    return interval_containing(m.target, legendre_point(m, iv.midpoint), iv.circle_id)


def legendre_interval_inverse(m: LegendreMap, iv: DistinguishedInterval) -> DistinguishedInterval:
    return interval_containing(m.source, legendre_point_inverse(m, iv.midpoint), iv.circle_id)


def legendre_class(theta: IrregularClass) -> tuple[IrregularClass, list[LegendreMap]]:
    pairs = [legendre_circle(c, cid) for cid, c in enumerate(theta.circles)]
    hat = IrregularClass(tuple((t, mult) for (t, _), mult in zip(pairs, theta.multiplicities)))
    return hat, [m for _, m in pairs]


@dataclass
class FormalTransform:
    """Interval bijection, sign table and transformed gluings.

    ``signs[(circle_id, s0_lift_hat)]`` is +1 when crossing that point enters
    a growth interval of the target circle (coming from a decay interval)
    and -1 otherwise.
    """

    maps: list[LegendreMap]
    interval_pairs: list[tuple[int, int, int]]
    signs: dict[tuple[int, Fraction], int]
    system: FormalSystem

    def sign_product(self, circle_id: int) -> int:
        out = 1
        for (cid, _), s in self.signs.items():
            if cid == circle_id:
                out *= s
        return out


def formal_transform(source: FormalSystem, theta_hat: IrregularClass, maps: list[LegendreMap]) -> FormalTransform:
    """Carry interval bases over by the Legendre map and twist gluings by signs."""
    signs: dict[tuple[int, Fraction], int] = {}
    pairs: list[tuple[int, int, int]] = []
    out = FormalSystem(theta_hat)
    for cid, m in enumerate(maps):
        hat_ivs = distinguished_intervals(m.target, cid)
        by_start = {iv.lo: iv for iv in hat_ivs}
        for iv in distinguished_intervals(m.source, cid):
            pairs.append((cid, iv.index, legendre_interval(m, iv).index))
        for p in s0_lifts(m.source):
            p_hat = m.lift(p)
            sign = by_start[p_hat].sign
            signs[(cid, p_hat)] = sign
            out.gluings[(cid, p_hat)] = source.gluing(cid, p).scale(sign)
    return FormalTransform(maps, pairs, signs, out)

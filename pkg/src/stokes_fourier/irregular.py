"""Exponent circles, irregular classes, distinguished points and intervals.

A circle <a z^k> with k = s/r is parametrised by lifts lam in [0, r).  The
branch over lift lam has argument ``phase(lam) = arg(a) - k*lam`` (turns),
so its real part is positive, negative or zero according to the cosine of
that phase.
"""

from __future__ import annotations

import functools
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .circle_arith import HALF, Angle, CoverPoint, Rational, angle_normalize, frac_mod
from .errors import (
    DuplicateCircle,
    MixedModuli,
    MixedSlopes,
    OnBoundary,
    ParseError,
    SlopeNotGreaterThanOne,
)

QUARTER = Fraction(1, 4)


def _factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class Modulus:
    """A positive real of the form prod p_i^(e_i), primes p_i, rational e_i.

    Closed under products and rational powers, which is all the Legendre
    transform needs, so moduli stay exact even when irrational.
    """

    factors: tuple[tuple[int, Fraction], ...] = ()

    @classmethod
    def of(cls, q: "Rational | Modulus | str") -> "Modulus":
        if isinstance(q, Modulus):
            return q
        if isinstance(q, str):
            return cls.parse(q)
        q = Fraction(q)
        if q <= 0:
            raise ValueError(f"modulus must be positive, got {q}")
        exps: dict[int, Fraction] = {}
        for p, e in _factor(q.numerator).items():
            exps[p] = exps.get(p, Fraction(0)) + e
        for p, e in _factor(q.denominator).items():
            exps[p] = exps.get(p, Fraction(0)) - e
        return cls._build(exps)

    @classmethod
    def _build(cls, exps: dict[int, Fraction]) -> "Modulus":
        return cls(tuple(sorted((p, Fraction(e)) for p, e in exps.items() if e != 0)))

    def __mul__(self, other: "Modulus | Rational") -> "Modulus":
        other = Modulus.of(other)
        exps = dict(self.factors)
        for p, e in other.factors:
            exps[p] = exps.get(p, Fraction(0)) + e
        return Modulus._build(exps)

    __rmul__ = __mul__

    def __pow__(self, e: Rational) -> "Modulus":
        e = Fraction(e)
        return Modulus._build({p: x * e for p, x in self.factors})

    def __float__(self) -> float:
        return float(math.prod(float(p) ** float(e) for p, e in self.factors))

    def is_rational(self) -> bool:
        return all(e.denominator == 1 for _, e in self.factors)

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        out = Fraction(1)
        for p, e in self.factors:
            out *= Fraction(p) ** int(e)
        return out

    def __str__(self) -> str:
        if self.is_rational():
            return str(self.as_fraction())
        parts = []
        for p, e in self.factors:
            parts.append(f"{p}^{e}" if e.denominator == 1 and e > 0 else f"{p}^({e})")
        return "*".join(parts)

    @classmethod
    def parse(cls, text: str) -> "Modulus":
        text = text.replace(" ", "")
        if not text:
            raise ParseError("empty modulus")
        out = cls.of(1)
        for part in text.split("*"):
            m = re.fullmatch(r"(\d+(?:/\d+)?)(?:\^\(?(-?\d+(?:/\d+)?)\)?)?", part)
            if not m:
                raise ParseError(f"cannot parse modulus factor {part!r}")
            out = out * (cls.of(Fraction(m.group(1))) ** Fraction(m.group(2) or 1))
        return out



@dataclass(frozen=True)
class ExponentCircle:
    """The circle <a z^k>: coefficient argument and modulus, slope k = s/r > 1."""

    coeff_arg: Angle
    slope: Fraction
    coeff_modulus: Modulus = field(default_factory=lambda: Modulus.of(1))

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeff_arg", angle_normalize(self.coeff_arg))
        object.__setattr__(self, "slope", Fraction(self.slope))
        object.__setattr__(self, "coeff_modulus", Modulus.of(self.coeff_modulus))

    @property
    def irregularity(self) -> int:
        return self.slope.numerator

    @property
    def ramification(self) -> int:
        return self.slope.denominator

    def phase(self, lift: Rational) -> Fraction:
        """Argument in turns of the branch over ``lift``."""
        return frac_mod(self.coeff_arg - self.slope * Fraction(lift))

    def germ_key(self) -> tuple:
        """Identifies the circle independently of the chosen branch of a."""
        return (frac_mod(self.coeff_arg, Fraction(1, self.ramification)), self.slope, self.coeff_modulus)

    def __str__(self) -> str:
        return f"<|a|={self.coeff_modulus}, arg a={self.coeff_arg}, z^{self.slope}>"


@dataclass(frozen=True)
class IrregularClass:
    entries: tuple[tuple[ExponentCircle, int], ...]

    def __post_init__(self) -> None:
        entries = tuple((c, int(m)) for c, m in self.entries)
        for _, m in entries:
            if m < 1:
                raise ValueError("multiplicities must be positive")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def of(cls, circles: Iterable[ExponentCircle | tuple[ExponentCircle, int]]) -> "IrregularClass":
        return cls(tuple(c if isinstance(c, tuple) else (c, 1) for c in circles))

    @property
    def circles(self) -> list[ExponentCircle]:
        return [c for c, _ in self.entries]

    @property
    def multiplicities(self) -> list[int]:
        return [m for _, m in self.entries]

    @property
    def rank(self) -> int:
        return sum(c.ramification * m for c, m in self.entries)

    @property
    def slope(self) -> Fraction:
        return self.entries[0][0].slope


def validate_assumption(theta: IrregularClass) -> None:
    """Raise unless all circles share one slope k > 1 and one modulus."""
    circles = theta.circles
    low = [i for i, c in enumerate(circles) if c.slope <= 1]
    if low:
        raise SlopeNotGreaterThanOne("slope must exceed 1", entries=low)
    if len({c.slope for c in circles}) > 1:
        raise MixedSlopes("circles have different slopes", entries=list(range(len(circles))),
                          slopes=[str(c.slope) for c in circles])
    if len({c.coeff_modulus for c in circles}) > 1:
        raise MixedModuli("circles have different coefficient moduli",
                          moduli=[str(c.coeff_modulus) for c in circles])
    seen: dict[tuple, int] = {}
    for i, c in enumerate(circles):
        if c.germ_key() in seen:
            raise DuplicateCircle("the same circle is listed twice", entries=[seen[c.germ_key()], i])
        seen[c.germ_key()] = i


def s0_lifts(c: ExponentCircle) -> list[Fraction]:
    return list(_s0_lifts(c))


@functools.lru_cache(maxsize=4096)
def _s0_lifts(c: ExponentCircle) -> tuple[Fraction, ...]:
    r = c.ramification
    k = c.slope
    return tuple(sorted(frac_mod((c.coeff_arg - QUARTER - Fraction(j, 2)) / k, r) for j in range(2 * c.irregularity)))


def s0_points(c: ExponentCircle, circle_id: int = 0) -> list[CoverPoint]:
    """The 2s lifts where the real part of the exponent vanishes, sorted."""
    return [CoverPoint(circle_id, lam, c.ramification) for lam in s0_lifts(c)]


@dataclass(frozen=True)
class DistinguishedInterval:
    """Open interval (lo, lo + length) of lifts between consecutive S0 points.

    ``lo`` is the start lift reduced into [0, r); the interval may wrap past r.
    """

    circle_id: int
    index: int
    lo: Fraction
    length: Fraction
    sign: int
    ramification: int

    @property
    def hi(self) -> Fraction:
        return self.lo + self.length

    @property
    def start(self) -> CoverPoint:
        return CoverPoint(self.circle_id, self.lo, self.ramification)

    @property
    def end(self) -> CoverPoint:
        return CoverPoint(self.circle_id, self.hi, self.ramification)

    @property
    def midpoint(self) -> CoverPoint:
        return CoverPoint(self.circle_id, self.lo + self.length / 2, self.ramification)

    def offset(self, lift: Rational) -> Fraction:
        """Position of ``lift`` measured from the start, in [0, r)."""
        return frac_mod(Fraction(lift) - self.lo, self.ramification)

    def contains(self, lift: Rational) -> bool:
        return 0 < self.offset(lift) < self.length

    def label(self) -> str:
        return f"{'A+' if self.sign > 0 else 'A-'}[{self.circle_id}:{self.index}]"


def distinguished_intervals(c: ExponentCircle, circle_id: int = 0) -> list[DistinguishedInterval]:
    """The 2s intervals, indexed positively from the one containing lift 0."""
    return list(_intervals(c, circle_id))


@functools.lru_cache(maxsize=4096)
def _intervals(c: ExponentCircle, circle_id: int) -> tuple[DistinguishedInterval, ...]:
    pts = s0_lifts(c)
    r = c.ramification
    length = Fraction(r, 2 * c.irregularity)
    if pts[0] != 0:
        pts = [pts[-1]] + pts[:-1]
    out = []
    for idx, lo in enumerate(pts):
        sign = 1 if c.phase(lo + length / 2) == 0 else -1
        out.append(DistinguishedInterval(circle_id, idx, lo, length, sign, r))
    return tuple(out)


def interval_containing(c: ExponentCircle, p: CoverPoint | Rational, circle_id: int | None = None) -> DistinguishedInterval:
    lift = p.lift if isinstance(p, CoverPoint) else Fraction(p)
    cid = circle_id if circle_id is not None else (p.circle_id if isinstance(p, CoverPoint) else 0)
    lift = frac_mod(lift, c.ramification)
    if lift in _s0_lifts(c):
        raise OnBoundary(f"lift {lift} is a distinguished point", lift=str(lift))
    for iv in _intervals(c, cid):
        if iv.contains(lift):
            return iv
    raise AssertionError("intervals cover the circle")


def real_part_rank(phase: Fraction) -> Fraction:
    """Order key: smaller value means larger real part (|a| fixed)."""
    phase = frac_mod(phase)
    return min(phase, 1 - phase)


def is_zero_real_part(phase: Fraction) -> bool:
    return frac_mod(phase, HALF) == QUARTER

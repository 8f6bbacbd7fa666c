"""Bundled worked examples: inputs and their expected transforms.

Each example is an input representation, the base used on the transformed
side and the expected output.  Expected outputs are written out entry by
entry rather than computed, so they serve as golden files.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping

from .circle_arith import Angle
from .irregular import ExponentCircle, IrregularClass
from .legendre import legendre_class
from .representation import (
    StokesFactor,
    StokesRepresentation,
    descending_strands,
    factor_directions,
    new_template,
    strands_over,
)
from .symbolic import ONE, ZERO, MonomialMatrix, P, SymbolicMatrix


@dataclass(frozen=True)
class Example:
    name: str
    source: StokesRepresentation
    target_base: Angle
    expected: StokesRepresentation


def literal_rep(theta: IrregularClass, base: Angle, perm: list[int], diag: list[str],
                entries: list[Mapping[tuple[int, int], str]]) -> StokesRepresentation:
    """Representation at the descending strand order from 1-based literal entries."""
    strands = descending_strands(theta, base)
    n = len(strands)
    factors = []
    for d, given in zip(factor_directions(theta, base), entries, strict=True):
        rows = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
        for (i, j), text in given.items():
            rows[i - 1][j - 1] = P(text)
        factors.append(StokesFactor(d, SymbolicMatrix(rows, strands, strands)))
    h = MonomialMatrix(perm, [P(x) for x in diag], strands)
    return StokesRepresentation(theta, base, tuple(strands), h, tuple(factors))


def gaussian() -> Example:
    """Two quadratic exponents an eighth of a turn apart; the transform is the identity."""
    theta = IrregularClass.of([ExponentCircle(0, 2, Fraction(1, 2)),
                               ExponentCircle(Fraction(1, 8), 2, Fraction(1, 2))])
    base = Fraction(3, 4)
    rep = new_template(theta, base, strands_over(theta, base), entry_names=["s1", "s2", "s3", "s4"],
                       tau_names=[["tau"], ["tau_red"]]).eval({"tau_red": P("tau^-1")})
    theta_hat, _ = legendre_class(theta)
    expected = literal_rep(theta_hat, base, [0, 1], ["tau", "tau^-1"],
                           [{(2, 1): "s1"}, {(1, 2): "s2"}, {(2, 1): "s3"}, {(1, 2): "s4"}])
    return Example("gaussian", rep, base, expected)


def airy() -> Example:
    """Trivial rank-one system on the cubic exponent; the transform has slope 3/2."""
    theta = IrregularClass.of([ExponentCircle(0, 3, Fraction(1, 3))])
    rep = new_template(theta, Fraction(65, 144)).eval({"tau": 1})
    theta_hat, _ = legendre_class(theta)
    base_hat = Fraction(65, 72)
    expected = literal_rep(theta_hat, base_hat, [1, 0], ["1", "-1"],
                           [{(2, 1): "-1"}, {(1, 2): "1"}, {(2, 1): "-1"}])
    return Example("airy", rep, base_hat, expected)


def five_thirds() -> Example:
    """Rank three with one 5/3 circle; the transform has slope 5/2 and rank two."""
    theta = IrregularClass.of([ExponentCircle(0, Fraction(5, 3))])
    rep = new_template(theta, Fraction(5, 6), entry_names=[f"s{i}" for i in range(1, 11)])
    theta_hat, _ = legendre_class(theta)
    base_hat = Fraction(1, 3)
    expected = literal_rep(theta_hat, base_hat, [1, 0], ["-1", "tau"],
                           [{(2, 1): "-s6"}, {(1, 2): "s4"}, {(2, 1): "-s2"}, {(1, 2): "s10"},
                            {(2, 1): "-s8"}])
    return Example("five-thirds", rep, base_hat, expected)


EXAMPLES: dict[str, Callable[[], Example]] = {
    "gaussian": gaussian,
    "airy": airy,
    "five-thirds": five_thirds,
}

"""Stokes data of the Fourier transform from the Stokes data of the input.

Pipeline: Legendre class and maps, transformed graded local system, pulled
back Stokes arrows, signed deformation data, and reconstruction of the
transformed Stokes factors by iterated single-unknown substitution.

Frames on the transformed side: the basis of every transformed interval is
the basis carried over from its preimage interval, and the strands at the
transformed base are listed from largest to smallest real part.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .circle_arith import Angle, CoverPoint, angle_normalize, crossed_points, frac_mod, signed_offset
from .errors import Inconsistent, NonTriangularSystem
from .irregular import IrregularClass
from .legendre import (
    FormalTransform,
    LegendreMap,
    formal_transform,
    legendre_class,
    legendre_point,
    legendre_point_inverse,
)
from .representation import (
    DeformationDatum,
    FormalSystem,
    PathWalker,
    StokesFactor,
    StokesRepresentation,
    Strand,
    descending_strands,
    factor_directions,
    formal_system,
    pattern_at_base,
    require_generic_base,
    validate,
)
from .stokes_geometry import StokesArrow, endpoint_sides, special_directions, stokes_arrows
from .symbolic import ONE, ZERO, LaurentPoly, MonomialMatrix, SymbolicMatrix

UNKNOWN_PREFIX = "__unknown"


@dataclass(frozen=True)
class PulledBackArrow:
    target_arrow: StokesArrow
    source_endpoints: tuple[CoverPoint, CoverPoint]
    sign: int


def pullback_arrows(theta: IrregularClass, theta_hat: IrregularClass,
                    maps: Sequence[LegendreMap]) -> list[PulledBackArrow]:
    """Preimages of the transformed midpoints, signed by their order.

    The sign is +1 when the target interval's midpoint comes before the
    source interval's midpoint along the shorter arc, and -1 otherwise
    (including when both project to the same direction).
    """
    out = []
    for a in stokes_arrows(theta_hat):
        mi, mj = a.source.midpoint, a.target.midpoint
        p = legendre_point_inverse(maps[mi.circle_id], mi)
        q = legendre_point_inverse(maps[mj.circle_id], mj)
        sign = 1 if signed_offset(mi.projection, mj.projection) < 0 else -1
        out.append(PulledBackArrow(a, (p, q), sign))
    return out


def transformed_deformation_data(rep: StokesRepresentation, pulled: Sequence[PulledBackArrow],
                                 formal: FormalSystem | None = None) -> list[DeformationDatum]:
    """Signed transports of the input along the pulled-back paths."""
    walker = PathWalker(rep, formal)
    out = []
    for pb in pulled:
        p, q = pb.source_endpoints
        out.append(DeformationDatum(pb.target_arrow, walker.block(p, q).scale(pb.sign)))
    return out


def default_target_base(rep: StokesRepresentation, theta_hat: IrregularClass,
                        maps: Sequence[LegendreMap]) -> Angle:
    """Image of the first base strand; moved off special directions if needed."""
    first = rep.strands[0].point
    cand = legendre_point(maps[first.circle_id], first).projection
    special = sorted(special_directions(theta_hat))
    if cand not in special:
        return cand
    nxt = min((frac_mod(d - cand) for d in special if d != cand), default=Fraction(1))
    return angle_normalize(cand + nxt / 2)


def transformed_monodromy(system: FormalSystem, base: Angle, strands: Sequence[Strand]) -> MonomialMatrix:
    return MonomialMatrix.from_matrix(system.matrix(base, Fraction(1), strands, strands))


def _unknown_template(theta_hat: IrregularClass, base: Angle, strands: Sequence[Strand],
                      h: MonomialMatrix) -> tuple[StokesRepresentation, list[str]]:
    index = {s: i for i, s in enumerate(strands)}
    unknowns: list[str] = []
    factors = []
    n = len(strands)
    for d in factor_directions(theta_hat, base):
        rows = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
        for i, j in sorted((index[t], index[s]) for t, s in pattern_at_base(theta_hat, base, d)):
            name = f"{UNKNOWN_PREFIX}{len(unknowns)}"
            unknowns.append(name)
            rows[i][j] = LaurentPoly.var(name)
        factors.append(StokesFactor(d, SymbolicMatrix(rows, strands, strands)))
    return StokesRepresentation(theta_hat, base, tuple(strands), h, tuple(factors)), unknowns


def reconstruct_from_data(theta_hat: IrregularClass, base: Angle, strands: Sequence[Strand],
                          h: MonomialMatrix, system: FormalSystem,
                          data: Sequence[DeformationDatum]) -> StokesRepresentation:
    """Solve for the Stokes factors whose deformation data are ``data``.

    Transports are taken in the frame given by ``system``.  An equation is
    used once, after substituting the entries found so far, it contains a
    single undetermined entry, linearly and with a unit-monomial
    coefficient.  Equations are only re-evaluated after an entry of a
    factor on their path has been found, which keeps every intermediate
    polynomial small.
    """
    cand, unknowns = _unknown_template(theta_hat, base, strands, h)
    dirs = [f.direction for f in cand.factors]
    owner = {u: i for i, f in enumerate(cand.factors) for u in f.matrix.variables()}
    paths = []
    for datum in data:
        a = datum.arrow
        x, y = a.source.midpoint, a.target.midpoint
        route = signed_offset(x.projection, y.projection)
        xs, ys = endpoint_sides(theta_hat, x.projection, y.projection)
        crossed = {i for _, i in crossed_points(x.projection, route, dirs, xs, ys)}
        paths.append((x, y, {u for u, i in owner.items() if i in crossed}))

    factors = list(cand.factors)
    walker = PathWalker(cand, system)
    pending = set(unknowns)

    def lhs(e: int) -> SymbolicMatrix:
        x, y, _ = paths[e]
        return walker.block(x, y) - data[e].value

    stale = set(range(len(data)))
    while pending:
        step = None
        for e in sorted(stale, key=lambda e: (len(paths[e][2] & pending), e)):
            stale.discard(e)
            if not paths[e][2] & pending:
                continue
            block = lhs(e)
            for row in block.rows:
                for eq in row:
                    live = eq.variables() & pending
                    if len(live) != 1:
                        continue
                    (u,) = live
                    try:
                        coef, rest = eq.split_linear(u)
                    except ValueError:
                        continue
                    if coef.is_unit_monomial():
                        step = (u, -rest / coef)
                        break
                if step:
                    break
            if step:
                break
        if step is None:
            raise NonTriangularSystem("no equation with a single solvable unknown remains",
                                      stuck=sorted(pending))
        u, val = step
        pending.discard(u)
        i = owner[u]
        factors[i] = StokesFactor(factors[i].direction, factors[i].matrix.eval({u: val}))
        walker.set_factor(i, factors[i].matrix)
        stale |= {e for e, p in enumerate(paths) if u in p[2]}
    bad = [str(x) for e in range(len(data)) for row in lhs(e).rows for x in row if not x.is_zero()]
    if bad:
        raise Inconsistent("deformation data are not consistent", residuals=bad)
    return StokesRepresentation(theta_hat, base, tuple(strands), h, tuple(factors))


@dataclass
class FourierResult:
    source: StokesRepresentation
    theta_hat: IrregularClass
    maps: list[LegendreMap]
    formal: FormalTransform
    pulled: list[PulledBackArrow]
    data: list[DeformationDatum]
    output: StokesRepresentation


def fourier_pipeline(rep: StokesRepresentation, base: Angle | None = None,
                     strict: bool = False) -> FourierResult:
    """Run every stage and keep the intermediate results.

    With ``strict`` the input and output must satisfy the monodromy relation;
    otherwise only shapes and patterns are checked, which allows templates
    whose relation has not been imposed.
    """
    validate(rep, strict=strict)
    theta_hat, maps = legendre_class(rep.theta)
    src_system = formal_system(rep)
    ft = formal_transform(src_system, theta_hat, maps)
    base_hat = angle_normalize(base) if base is not None else default_target_base(rep, theta_hat, maps)
    require_generic_base(theta_hat, base_hat)
    strands = descending_strands(theta_hat, base_hat)
    h_hat = transformed_monodromy(ft.system, base_hat, strands)
    pulled = pullback_arrows(rep.theta, theta_hat, maps)
    data = transformed_deformation_data(rep, pulled, src_system)
    out = reconstruct_from_data(theta_hat, base_hat, strands, h_hat, ft.system, data)
    validate(out, strict=strict)
    return FourierResult(rep, theta_hat, list(maps), ft, pulled, data, out)


def fourier_transform(rep: StokesRepresentation, base: Angle | None = None,
                      strict: bool = False) -> StokesRepresentation:
    return fourier_pipeline(rep, base, strict).output

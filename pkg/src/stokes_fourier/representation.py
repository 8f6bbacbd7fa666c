"""Stokes representations: formal monodromy, Stokes factors and transports.

Matrices act on column vectors indexed by strands, i.e. branch points over
a direction together with a copy index for multiplicities.  Entry (i, j)
of a Stokes factor is the coefficient of target strand i in the image of
source strand j.

The graded local system is presented by gluings at distinguished points.
Each interval of a circle carries a basis, and crossing a distinguished point
positively changes coordinates by that point's gluing.  The gauge used
for a representation puts the block of h taking sheet k of a circle to
sheet k+1 at the exit of the interval that contains sheet k at the base
direction; every other gluing is the identity.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .circle_arith import (
    Angle,
    CoverPoint,
    angle_normalize,
    crossed_points,
    frac_mod,
    signed_offset,
)
from .errors import (
    BadFormalShape,
    DegenerateConfiguration,
    NonGenericBase,
    PatternViolated,
    RelationViolated,
)
from .irregular import IrregularClass, interval_containing, real_part_rank, s0_lifts
from .stokes_geometry import (
    StokesArrow,
    branch_phase,
    endpoint_sides,
    is_generic,
    singular_directions,
    stokes_arrows,
    stokes_path,
)
from .symbolic import (
    ONE,
    ZERO,
    LaurentPoly,
    MonomialMatrix,
    SymbolicMatrix,
    mat_mul,
    mat_product,
    monomial_inverse,
    unipotent_inverse,
)


@dataclass(frozen=True, order=True)
class Strand:
    point: CoverPoint
    copy: int = 0

    @property
    def circle_id(self) -> int:
        return self.point.circle_id

    @property
    def lift(self) -> Fraction:
        return self.point.lift

    def shifted(self, delta) -> "Strand":
        return Strand(self.point.shifted(delta), self.copy)

    def __str__(self) -> str:
        return f"{self.point.circle_id}:{self.point.lift}#{self.copy}"


def strands_over(theta: IrregularClass, d: Angle) -> list[Strand]:
    """All strands over d in canonical order (circle, lift, copy)."""
    d = angle_normalize(d)
    return [Strand(CoverPoint(cid, d + j, c.ramification), copy)
            for cid, (c, mult) in enumerate(theta.entries)
            for j in range(c.ramification) for copy in range(mult)]


def strands_at_point(theta: IrregularClass, p: CoverPoint) -> list[Strand]:
    return [Strand(p, copy) for copy in range(theta.multiplicities[p.circle_id])]


def descending_strands(theta: IrregularClass, d: Angle) -> list[Strand]:
    """Strands over d from largest to smallest real part of the exponent."""
    return sorted(strands_over(theta, d),
                  key=lambda s: (real_part_rank(branch_phase(theta, s.point)), s.point, s.copy))


@dataclass(frozen=True)
class StokesFactor:
    direction: Angle
    matrix: SymbolicMatrix


@dataclass(frozen=True)
class StokesRepresentation:
    """Base direction, strand order at the base, h and the Stokes factors.

    ``factors`` are ordered positively starting just after ``base``; all
    matrices use ``strands`` as row and column labels.
    """

    theta: IrregularClass
    base: Angle
    strands: tuple[Strand, ...]
    h: MonomialMatrix
    factors: tuple[StokesFactor, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "base", angle_normalize(self.base))
        object.__setattr__(self, "strands", tuple(self.strands))
        object.__setattr__(self, "factors", tuple(self.factors))
        labels = self.strands
        object.__setattr__(self, "h", MonomialMatrix(self.h.perm, self.h.diag, labels))
        fixed = tuple(StokesFactor(angle_normalize(f.direction), f.matrix.relabel(labels, labels))
                      for f in self.factors)
        object.__setattr__(self, "factors", fixed)

    @property
    def n(self) -> int:
        return len(self.strands)

    def variables(self) -> set[str]:
        out = self.h.variables()
        for f in self.factors:
            out |= f.matrix.variables()
        return out

    def eval(self, assignment: Mapping[str, object]) -> "StokesRepresentation":
        return StokesRepresentation(self.theta, self.base, self.strands, self.h.eval(assignment),
                                    tuple(StokesFactor(f.direction, f.matrix.eval(assignment))
                                          for f in self.factors))

    def factor_at(self, d: Angle) -> SymbolicMatrix:
        for f in self.factors:
            if f.direction == angle_normalize(d):
                return f.matrix
        raise KeyError(d)

    def relation_product(self) -> SymbolicMatrix:
        """h * S_s * ... * S_1."""
        out = self.h.to_matrix()
        for f in reversed(self.factors):
            out = mat_mul(out, f.matrix)
        return out


@dataclass(frozen=True)
class DeformationDatum:
    arrow: StokesArrow
    value: SymbolicMatrix


# -- the graded local system ---------------------------------------------------

@dataclass
class FormalSystem:
    """Gluings of the graded local system at distinguished points.

    ``gluings[(circle_id, s0_lift)]`` is a square block over the copies of
    that circle; missing entries are identities.
    """

    theta: IrregularClass
    gluings: dict[tuple[int, Fraction], SymbolicMatrix] = field(default_factory=dict)

    def _identity(self, cid: int) -> SymbolicMatrix:
        return SymbolicMatrix.identity(self.theta.multiplicities[cid])

    def gluing(self, cid: int, lift: Fraction) -> SymbolicMatrix:
        return self.gluings.get((cid, lift)) or self._identity(cid)

    def transport_block(self, cid: int, lift: Fraction, delta: Fraction,
                        end_inclusive: bool = True) -> SymbolicMatrix:
        """Product of the gluings met moving from ``lift`` forward by delta >= 0."""
        c = self.theta.circles[cid]
        r = c.ramification
        events: list[tuple[Fraction, Fraction]] = []
        for p in s0_lifts(c):
            if (cid, p) not in self.gluings:
                continue
            first = frac_mod(p - lift, r) or r
            t = first
            while t < delta or (t == delta and end_inclusive):
                events.append((t, p))
                t += r
        out = self._identity(cid)
        for _, p in sorted(events):
            out = mat_mul(self.gluings[(cid, p)], out)
        return out

    def matrix(self, x: Angle, delta: Fraction, rows: Sequence[Strand], cols: Sequence[Strand],
               end_inclusive: bool = True) -> SymbolicMatrix:
        """Transport from the fibre at x to the fibre at x + delta (delta >= 0)."""
        n = len(cols)
        entries = [[ZERO] * n for _ in range(len(rows))]
        row_index = {s: i for i, s in enumerate(rows)}
        done: set[tuple[int, Fraction]] = set()
        for s in cols:
            key = (s.circle_id, s.lift)
            if key in done:
                continue
            done.add(key)
            block = self.transport_block(s.circle_id, s.lift, delta, end_inclusive)
            mult = self.theta.multiplicities[s.circle_id]
            dest = s.point.shifted(delta)
            for a in range(mult):
                j = cols.index(Strand(s.point, a))
                for b in range(mult):
                    entries[row_index[Strand(dest, b)]][j] = block[b, a]
        return SymbolicMatrix(entries, rows, cols)

    def holonomy(self, cid: int) -> SymbolicMatrix:
        """Product of all gluings of a circle, starting just after lift 0."""
        c = self.theta.circles[cid]
        return self.transport_block(cid, Fraction(0), Fraction(c.ramification))


def circle_sheets(rep_strands: Sequence[Strand], cid: int, ramification: int) -> list[CoverPoint]:
    """Sheets of a circle at the base, starting from its first listed strand."""
    first = next(s.point for s in rep_strands if s.circle_id == cid)
    return [first.shifted(k) for k in range(ramification)]


def check_formal_shape(theta: IrregularClass, strands: Sequence[Strand], h: MonomialMatrix) -> None:
    for j, s in enumerate(strands):
        tgt = strands[h.perm[j]]
        if tgt.point != s.point.shifted(1):
            raise BadFormalShape(f"h sends strand {s} to {tgt}, not to the next sheet",
                                 column=j + 1)
        if not h.diag[j].is_unit_monomial():
            raise BadFormalShape(f"entry {h.diag[j]} of h is not invertible", column=j + 1)


def formal_system(rep: StokesRepresentation) -> FormalSystem:
    """The gluing gauge determined by h (see module docstring)."""
    theta = rep.theta
    check_formal_shape(theta, rep.strands, rep.h)
    hm = rep.h.to_matrix()
    out = FormalSystem(theta)
    for cid, (c, mult) in enumerate(theta.entries):
        for sheet in circle_sheets(rep.strands, cid, c.ramification):
            iv = interval_containing(c, sheet, cid)
            rows = strands_at_point(theta, sheet.shifted(1))
            cols = strands_at_point(theta, sheet)
            block = hm.block(rows, cols)
            block = SymbolicMatrix(block.rows)
            if not block.is_identity():
                out.gluings[(cid, frac_mod(iv.hi, c.ramification))] = block
    return out


# -- templates and validation ------------------------------------------------

def factor_directions(theta: IrregularClass, base: Angle) -> list[Angle]:
    base = angle_normalize(base)
    return sorted(singular_directions(theta), key=lambda d: frac_mod(d - base))


def pattern_at_base(theta: IrregularClass, base: Angle, d: Angle) -> set[tuple[Strand, Strand]]:
    """Allowed (target, source) strand pairs of S_d, moved back to the base."""
    return set(_pattern_at_base(theta, angle_normalize(base), angle_normalize(d)))


@functools.lru_cache(maxsize=8192)
def _pattern_at_base(theta: IrregularClass, base: Angle, d: Angle) -> frozenset[tuple[Strand, Strand]]:
    delta = frac_mod(d - base)
    out = set()
    mults = theta.multiplicities
    for a in stokes_arrows(theta):
        if a.direction != d:
            continue
        tgt = a.target_point.shifted(-delta)
        src = a.source_point.shifted(-delta)
        for ct in range(mults[tgt.circle_id]):
            for cs in range(mults[src.circle_id]):
                out.add((Strand(tgt, ct), Strand(src, cs)))
    return frozenset(out)


def require_generic_base(theta: IrregularClass, base: Angle) -> None:
    if not is_generic(theta, base):
        raise NonGenericBase(f"base direction {base} is singular, a Stokes direction or a distinguished point",
                             base=str(base))


def _tau_names(theta: IrregularClass) -> list[list[str]]:
    single = len(theta.entries) == 1
    out = []
    for cid, (_, mult) in enumerate(theta.entries):
        stem = "tau" if single else f"tau{cid + 1}"
        out.append([stem if mult == 1 else f"{stem}_{c + 1}" for c in range(mult)])
    return out


def new_template(theta: IrregularClass, base: Angle, strand_order: Sequence[Strand] | None = None,
                 entry_names: Sequence[str] | None = None,
                 tau_names: Sequence[Sequence[str]] | None = None) -> StokesRepresentation:
    """Representation with fresh symbols: h in minimal-framing shape, free factors.

    The relation is not imposed.  Entry names default to
    ``s[direction][row,col]`` with 1-based positions in the strand order and
    are otherwise taken from ``entry_names`` in factor order, then by row and
    column.
    """
    base = angle_normalize(base)
    require_generic_base(theta, base)
    strands = list(strand_order) if strand_order is not None else descending_strands(theta, base)
    if sorted(strands) != sorted(strands_over(theta, base)):
        raise ValueError("strand order must list every strand over the base exactly once")
    taus = [list(t) for t in tau_names] if tau_names is not None else _tau_names(theta)
    index = {s: i for i, s in enumerate(strands)}
    perm = [0] * len(strands)
    diag: list[LaurentPoly] = [ONE] * len(strands)
    for cid, (c, mult) in enumerate(theta.entries):
        sheets = circle_sheets(strands, cid, c.ramification)
        for k, sheet in enumerate(sheets):
            for copy in range(mult):
                j = index[Strand(sheet, copy)]
                perm[j] = index[Strand(sheet.shifted(1), copy)]
                if k == c.ramification - 1:
                    diag[j] = LaurentPoly.var(taus[cid][copy])
    h = MonomialMatrix(perm, diag, strands)
    names = iter(entry_names) if entry_names is not None else None
    factors = []
    for d in factor_directions(theta, base):
        pairs = sorted((index[t], index[s]) for t, s in pattern_at_base(theta, base, d))
        rows = [[ONE if i == j else ZERO for j in range(len(strands))] for i in range(len(strands))]
        for i, j in pairs:
            name = next(names) if names is not None else f"s[{d}][{i + 1},{j + 1}]"
            rows[i][j] = LaurentPoly.var(name)
        factors.append(StokesFactor(d, SymbolicMatrix(rows, strands, strands)))
    return StokesRepresentation(theta, base, tuple(strands), h, tuple(factors))


def check_patterns(rep: StokesRepresentation) -> None:
    theta = rep.theta
    dirs = factor_directions(theta, rep.base)
    got = [f.direction for f in rep.factors]
    if got != dirs:
        raise PatternViolated("factor directions must be the singular directions ordered from the base",
                              expected=[str(d) for d in dirs], got=[str(d) for d in got])
    index = {s: i for i, s in enumerate(rep.strands)}
    for k, f in enumerate(rep.factors):
        allowed = {(index[t], index[s]) for t, s in pattern_at_base(theta, rep.base, f.direction)}
        m = f.matrix
        for i in range(rep.n):
            if m[i, i] != ONE:
                raise PatternViolated(f"factor {k + 1} has diagonal entry {m[i, i]}", factor=k + 1, row=i + 1)
        for i, j in m.nonzero_offdiagonal():
            if (i, j) not in allowed:
                raise PatternViolated(f"factor {k + 1} has entry {m[i, j]} outside its Stokes group",
                                      factor=k + 1, row=i + 1, col=j + 1)


def validate(rep: StokesRepresentation, strict: bool = True) -> None:
    """Check base, strands, h shape, factor patterns and (if strict) the relation.

    Raises the first problem found.  A relation failure whose cause is
    det(h) != 1 is flagged as a determinant obstruction, since every
    Stokes factor has determinant 1.
    """
    theta = rep.theta
    require_generic_base(theta, rep.base)
    if sorted(rep.strands) != sorted(strands_over(theta, rep.base)):
        raise BadFormalShape("strand order does not list the fibre over the base")
    check_formal_shape(theta, rep.strands, rep.h)
    check_patterns(rep)
    if not strict:
        return
    residual = rep.relation_product() - SymbolicMatrix.identity(rep.n, rep.strands)
    if not residual.is_zero():
        det = rep.h.det()
        obstruction = det != ONE
        msg = "h*S_s*...*S_1 is not the identity"
        if obstruction:
            msg += f"; det(h) = {det} differs from 1, so no Stokes entries can satisfy the relation"
        raise RelationViolated(msg, residual=residual.to_lists(), determinant_obstruction=obstruction,
                               det_h=str(det))


def minimal_framing_normalize(rep: StokesRepresentation) -> StokesRepresentation:
    """Diagonal gauge making h the identity between consecutive sheets.

    Each circle keeps its first listed sheet fixed; afterwards only the
    corner block (last sheet to first sheet) of h is nontrivial.
    """
    theta = rep.theta
    check_formal_shape(theta, rep.strands, rep.h)
    index = {s: i for i, s in enumerate(rep.strands)}
    g: list[LaurentPoly] = [ONE] * rep.n
    for cid, (c, mult) in enumerate(theta.entries):
        sheets = circle_sheets(rep.strands, cid, c.ramification)
        for sheet in sheets[:-1]:
            for copy in range(mult):
                j = index[Strand(sheet, copy)]
                g[rep.h.perm[j]] = rep.h.diag[j] * g[j]
    ginv = [x.unit_inverse() for x in g]
    diag = [ginv[rep.h.perm[j]] * rep.h.diag[j] * g[j] for j in range(rep.n)]
    h = MonomialMatrix(rep.h.perm, diag, rep.strands)
    factors = []
    for f in rep.factors:
        rows = [[ginv[i] * f.matrix[i, j] * g[j] for j in range(rep.n)] for i in range(rep.n)]
        factors.append(StokesFactor(f.direction, SymbolicMatrix(rows, rep.strands, rep.strands)))
    return StokesRepresentation(theta, rep.base, rep.strands, h, tuple(factors))


# -- transports ---------------------------------------------------------------

def fibre_labels(rep: StokesRepresentation, x: Angle) -> list[Strand]:
    x = angle_normalize(x)
    return list(rep.strands) if x == rep.base else strands_over(rep.theta, x)


def _monomial_matrix_inverse(m: SymbolicMatrix) -> SymbolicMatrix:
    mm = MonomialMatrix.from_matrix(m)
    inv = monomial_inverse(mm).to_matrix()
    return SymbolicMatrix(inv.rows, m.col_labels, m.row_labels)


def arc_transport(rep: StokesRepresentation, x: Angle, y: Angle,
                  formal: FormalSystem | None = None) -> SymbolicMatrix:
    """Formal transport along the positive arc from x to y; x = y is a full turn."""
    formal = formal or formal_system(rep)
    x, y = angle_normalize(x), angle_normalize(y)
    length = frac_mod(y - x) or Fraction(1)
    return formal.matrix(x, length, fibre_labels(rep, y), fibre_labels(rep, x))


def _from_base(rep: StokesRepresentation, formal: FormalSystem, x: Angle, side: int) -> SymbolicMatrix:
    return formal.matrix(rep.base, frac_mod(x - rep.base), fibre_labels(rep, x), list(rep.strands),
                         end_inclusive=side >= 0)


def interior_transport(rep: StokesRepresentation, x: Angle, y: Angle, route: Fraction | None = None,
                       x_side: int | None = None, y_side: int | None = None,
                       formal: FormalSystem | None = None) -> SymbolicMatrix:
    """Transport through the interior from direction x to direction y.

    The path leaves radially at x, turns by ``route`` (default: the shorter
    way, half turns going positively) near the centre and exits radially at
    y.  Read in the base frame, every singular direction crossed positively
    contributes its Stokes factor, crossing the base positively contributes
    h, and negative crossings contribute inverses.  An endpoint on a
    singular direction needs a side: -1 for just before, +1 for just after.
    """
    theta = rep.theta
    formal = formal or formal_system(rep)
    x, y = angle_normalize(x), angle_normalize(y)
    default_xs, default_ys = endpoint_sides(theta, x, y)
    xs = default_xs if x_side is None else x_side
    ys = default_ys if y_side is None else y_side
    sing = set(f.direction for f in rep.factors)
    if (x in sing and xs == 0) or (y in sing and ys == 0):
        raise DegenerateConfiguration("an endpoint lies on a singular direction; choose a side")
    if route is None:
        route = signed_offset(x, y)
    route = Fraction(route)
    dirs = [f.direction for f in rep.factors]
    events = [(t, rep.factors[i].matrix) for t, i in crossed_points(x, route, dirs, xs, ys)]
    xb = 1 if x == rep.base else xs
    yb = 1 if y == rep.base else ys
    h = rep.h.to_matrix()
    events += [(t, h) for t, _ in crossed_points(x, route, [rep.base], xb, yb)]
    forward = (route, ys) > (0, xs)
    events.sort(key=lambda e: e[0], reverse=not forward)
    w = SymbolicMatrix.identity(rep.n, rep.strands)
    for _, m in events:
        if forward:
            w = mat_mul(m, w)
        elif m is h:
            w = mat_mul(_monomial_matrix_inverse(h), w)
        else:
            w = mat_mul(unipotent_inverse(m), w)
    ax = _from_base(rep, formal, x, xs)
    ay = _from_base(rep, formal, y, ys)
    return mat_product([ay, w, _monomial_matrix_inverse(ax)])


def transport_block(rep: StokesRepresentation, start: CoverPoint, end: CoverPoint,
                    route: Fraction | None = None, formal: FormalSystem | None = None) -> SymbolicMatrix:
    """Block of the interior transport from the strands at ``start`` to those at ``end``."""
    t = interior_transport(rep, start.projection, end.projection, route, formal=formal)
    return t.block(strands_at_point(rep.theta, end), strands_at_point(rep.theta, start))


def deformation_datum(rep: StokesRepresentation, arrow: StokesArrow,
                      formal: FormalSystem | None = None) -> DeformationDatum:
    """Interior transport from the source midpoint to the target midpoint, as a block."""
    return _datum(PathWalker(rep, formal), arrow)


def _datum(walker: "PathWalker", arrow: StokesArrow) -> DeformationDatum:
    path = stokes_path(walker.theta, arrow)
    block = walker.block(path.start_mid, path.end_mid, path.route, path.start_side, path.end_side)
    return DeformationDatum(arrow, block)


def deformation_data(rep: StokesRepresentation) -> list[DeformationDatum]:
    walker = PathWalker(rep)
    return [_datum(walker, a) for a in stokes_arrows(rep.theta)]


class PathWalker:
    """Blocks of interior transports computed by pushing columns along the path.

    Equivalent to slicing ``interior_transport`` but only tracks the columns
    of the source strands, using the sparsity of the Stokes factors.
    ``set_factor`` replaces a factor in place, which the reconstruction uses
    as entries become known.
    """

    def __init__(self, rep: StokesRepresentation, formal: FormalSystem | None = None) -> None:
        self.rep = rep
        self.theta = rep.theta
        self.formal = formal or formal_system(rep)
        self.index = {s: i for i, s in enumerate(rep.strands)}
        self.dirs = [f.direction for f in rep.factors]
        self.sparse = [self._sparse(f.matrix) for f in rep.factors]
        self.h_perm = rep.h.perm
        self.h_diag = rep.h.diag
        self.h_inv = monomial_inverse(rep.h)
        self.sing = frozenset(self.dirs)
        self._event_cache: dict[tuple, list[int]] = {}
        self._formal_cache: dict[tuple, tuple[SymbolicMatrix, SymbolicMatrix]] = {}

    def _formal_block(self, point: CoverPoint, delta: Fraction, inclusive: bool) -> tuple[SymbolicMatrix, SymbolicMatrix]:
        key = (point, delta, inclusive)
        if key not in self._formal_cache:
            b = self.formal.transport_block(point.circle_id, point.lift, delta, end_inclusive=inclusive)
            self._formal_cache[key] = (b, monomial_inverse(MonomialMatrix.from_matrix(b)).to_matrix())
        return self._formal_cache[key]

    def _events(self, x: Fraction, route: Fraction, xs: int, ys: int, forward: bool) -> list[int]:
        """Factor indices crossed in traversal order, with -1 for the base."""
        key = (x, route, xs, ys)
        if key not in self._event_cache:
            base = self.rep.base
            events = list(crossed_points(x, route, self.dirs, xs, ys))
            xb = 1 if x == base else xs
            yb = 1 if angle_normalize(x + route) == base else ys
            events += [(t, -1) for t, _ in crossed_points(x, route, [base], xb, yb)]
            events.sort(key=lambda e: e[0], reverse=not forward)
            self._event_cache[key] = [k for _, k in events]
        return self._event_cache[key]

    @staticmethod
    def _sparse(m: SymbolicMatrix) -> list[tuple[int, int, LaurentPoly]]:
        return [(i, j, m[i, j]) for i, j in m.nonzero_offdiagonal()]

    def set_factor(self, k: int, matrix: SymbolicMatrix) -> None:
        self.sparse[k] = self._sparse(matrix)

    def _apply_factor(self, k: int, cols: list[list[LaurentPoly]], inverse: bool) -> list[list[LaurentPoly]]:
        entries = self.sparse[k]
        if not entries:
            return cols
        if not inverse:
            out = [list(c) for c in cols]
            for i, j, x in entries:
                for c, oc in zip(cols, out):
                    if not c[j].is_zero():
                        oc[i] = oc[i] + x * c[j]
            return out
        # (I + N)^-1 v = v - N v + N^2 v - ...
        out = [list(c) for c in cols]
        term = cols
        for _ in range(len(self.index)):
            nxt = []
            any_nonzero = False
            for c in term:
                v = [ZERO] * len(c)
                for i, j, x in entries:
                    if not c[j].is_zero():
                        v[i] = v[i] - x * c[j]
                        any_nonzero = True
                nxt.append(v)
            if not any_nonzero:
                break
            for oc, v in zip(out, nxt):
                for i, x in enumerate(v):
                    if not x.is_zero():
                        oc[i] = oc[i] + x
            term = nxt
        return out

    def _apply_h(self, cols: list[list[LaurentPoly]], inverse: bool) -> list[list[LaurentPoly]]:
        m = self.h_inv if inverse else self.rep.h
        out = []
        for c in cols:
            v = [ZERO] * len(c)
            for j, x in enumerate(c):
                if not x.is_zero():
                    v[m.perm[j]] = m.diag[j] * x
            out.append(v)
        return out

    def block(self, start: CoverPoint, end: CoverPoint, route: Fraction | None = None,
              x_side: int | None = None, y_side: int | None = None) -> SymbolicMatrix:
        theta, rep = self.theta, self.rep
        x, y = start.projection, end.projection
        default_xs, default_ys = endpoint_sides(theta, x, y)
        xs = default_xs if x_side is None else x_side
        ys = default_ys if y_side is None else y_side
        if (x in self.sing and xs == 0) or (y in self.sing and ys == 0):
            raise DegenerateConfiguration("an endpoint lies on a singular direction; choose a side")
        if route is None:
            route = signed_offset(x, y)
        route = Fraction(route)
        dx, dy = frac_mod(x - rep.base), frac_mod(y - rep.base)
        src_b = start.shifted(-dx)
        tgt_b = end.shifted(-dy)
        mult_s = theta.multiplicities[start.circle_id]
        mult_t = theta.multiplicities[end.circle_id]
        _, bx_inv = self._formal_block(src_b, dx, xs >= 0)
        by, _ = self._formal_block(tgt_b, dy, ys >= 0)
        n = len(self.index)
        cols = []
        for a in range(mult_s):
            v = [ZERO] * n
            for c in range(mult_s):
                v[self.index[Strand(src_b, c)]] = bx_inv[c, a]
            cols.append(v)
        forward = (route, ys) > (0, xs)
        for k in self._events(x, route, xs, ys, forward):
            cols = self._apply_h(cols, not forward) if k < 0 else self._apply_factor(k, cols, not forward)
        rows = []
        for b in range(mult_t):
            row = []
            for a in range(mult_s):
                acc = ZERO
                for c in range(mult_t):
                    acc = acc + by[b, c] * cols[a][self.index[Strand(tgt_b, c)]]
                row.append(acc)
            rows.append(row)
        return SymbolicMatrix(rows, strands_at_point(theta, end), strands_at_point(theta, start))

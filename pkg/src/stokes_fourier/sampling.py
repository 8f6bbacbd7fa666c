"""Random irregular classes and random valid Stokes representations.

Valid representations are built without solving polynomial equations.
Over an arc of length 1/(2k) starting at a generic direction t, the
Stokes factors multiply bijectively onto the unipotent group that is upper
triangular for the order of the strands by imaginary part of the exponent
at t.  The next such arc gives the opposite group.  So the factors outside
the last two such arcs before the base are drawn at random, and the
remaining product is split by an LDU decomposition.  The diagonal part
becomes the scalars of h, and a diagonal gauge then brings h to minimal
framing.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .circle_arith import Angle, angle_normalize, frac_mod
from .irregular import ExponentCircle, IrregularClass, real_part_rank
from .representation import (
    StokesFactor,
    StokesRepresentation,
    Strand,
    descending_strands,
    factor_directions,
    minimal_framing_normalize,
    pattern_at_base,
    validate,
)
from .stokes_geometry import branch_phase, is_generic
from .symbolic import ONE, ZERO, LaurentPoly, MonomialMatrix, SymbolicMatrix, mat_mul, mat_product, \
    solve_by_substitution

DEFAULT_SLOPES = (Fraction(3, 2), Fraction(2), Fraction(5, 2), Fraction(5, 3), Fraction(3))


def random_class(rng: random.Random, slopes: Sequence[Fraction] = DEFAULT_SLOPES,
                 max_circles: int = 3, arg_denominator: int = 24) -> IrregularClass:
    """Multiplicity-one class with 1..max_circles distinct circles of one slope."""
    k = Fraction(rng.choice(list(slopes)))
    count = rng.randint(1, max_circles)
    circles: list[ExponentCircle] = []
    seen = set()
    while len(circles) < count:
        c = ExponentCircle(Fraction(rng.randrange(arg_denominator), arg_denominator), k)
        if c.germ_key() not in seen:
            seen.add(c.germ_key())
            circles.append(c)
    return IrregularClass.of(circles)


def random_generic_direction(theta: IrregularClass, rng: random.Random, denominator: int = 1440) -> Angle:
    while True:
        d = Fraction(2 * rng.randrange(denominator) + 1, 2 * denominator)
        if is_generic(theta, d):
            return d


def random_rational(rng: random.Random, bound: int = 3) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, 2))


def _ldu(q: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[Fraction], list[list[Fraction]]] | None:
    """Doolittle LDU without pivoting; None when a leading minor vanishes."""
    n = len(q)
    a = [row[:] for row in q]
    lower = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for c in range(n):
        if a[c][c] == 0:
            return None
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            lower[r][c] = f
            for j in range(c, n):
                a[r][j] -= f * a[c][j]
    diag = [a[i][i] for i in range(n)]
    upper = [[a[i][j] / diag[i] for j in range(n)] for i in range(n)]
    return lower, diag, upper


def _factorize(target: SymbolicMatrix, theta: IrregularClass, base: Angle, dirs: Sequence[Angle],
               strands: Sequence[Strand]) -> list[StokesFactor]:
    """Stokes factors at ``dirs`` (in order) whose product S_last...S_first is ``target``."""
    index = {s: i for i, s in enumerate(strands)}
    n = len(strands)
    unknowns: list[str] = []
    factors = []
    for d in dirs:
        rows = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
        for t, s in pattern_at_base(theta, base, d):
            name = f"x{len(unknowns)}"
            unknowns.append(name)
            rows[index[t]][index[s]] = LaurentPoly.var(name)
        factors.append(StokesFactor(d, SymbolicMatrix(rows, strands, strands)))
    if not factors:
        return []
    prod = mat_product([f.matrix for f in reversed(factors)])
    eqs = [prod[i, j] - target[i, j] for i in range(n) for j in range(n)]
    solution, leftover = solve_by_substitution(eqs, unknowns)
    if leftover:
        raise AssertionError("half-period factorisation failed")
    return [StokesFactor(f.direction, f.matrix.eval(solution)) for f in factors]


def random_valid_rep(theta: IrregularClass, base: Angle, rng: random.Random,
                     strand_order: Sequence[Strand] | None = None, bound: int = 3,
                     max_tries: int = 100) -> StokesRepresentation:
    """Random numeric representation satisfying the relation, in minimal framing."""
    if any(m != 1 for m in theta.multiplicities):
        raise ValueError("the sampler handles multiplicity-one classes only")
    base = angle_normalize(base)
    strands = list(strand_order) if strand_order is not None else descending_strands(theta, base)
    n = len(strands)
    index = {s: i for i, s in enumerate(strands)}
    width = Fraction(1, 2) / theta.slope
    dirs = factor_directions(theta, base)
    offsets = [frac_mod(d - base) for d in dirs]
    free = [d for d, o in zip(dirs, offsets) if o < 1 - 2 * width]
    arc1 = [d for d, o in zip(dirs, offsets) if 1 - 2 * width < o < 1 - width]
    arc2 = [d for d, o in zip(dirs, offsets) if o > 1 - width]
    # Order the strands by the imaginary part of their continuation to the arc start.
    lead = 1 - 2 * width
    im_key = {s: real_part_rank(branch_phase(theta, s.point.shifted(lead)) - Fraction(1, 4)) for s in strands}
    sigma = sorted(strands, key=lambda s: -im_key[s])
    perm = [index[s.shifted(1)] for s in strands]
    w_inv = MonomialMatrix(perm, [ONE] * n, strands).inverse().to_matrix()
    for _ in range(max_tries):
        free_factors = []
        for d in free:
            rows = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
            for t, s in pattern_at_base(theta, base, d):
                rows[index[t]][index[s]] = LaurentPoly.const(random_rational(rng, bound))
            free_factors.append(StokesFactor(d, SymbolicMatrix(rows, strands, strands)))
        prod_inv = SymbolicMatrix.identity(n, strands)
        for f in free_factors:
            prod_inv = mat_mul(prod_inv, _unipotent_inverse_numeric(f.matrix))
        q = mat_mul(w_inv, prod_inv)
        qs = [[q.entry(a, b).constant_value() for b in sigma] for a in sigma]
        dec = _ldu(qs)
        if dec is None:
            continue
        lower, diag, upper = dec
        pos = {s: i for i, s in enumerate(sigma)}
        def back(mat: list[list[Fraction]]) -> SymbolicMatrix:
            return SymbolicMatrix([[mat[pos[a]][pos[b]] for b in strands] for a in strands], strands, strands)
        conj_lower = [[lower[i][j] * diag[j] / diag[i] for j in range(n)] for i in range(n)]
        u1 = _factorize(back(upper), theta, base, arc1, strands)
        u2 = _factorize(back(conj_lower), theta, base, arc2, strands)
        h = MonomialMatrix(perm, [LaurentPoly.const(diag[pos[s]]) for s in strands], strands)
        rep = StokesRepresentation(theta, base, tuple(strands), h, tuple(free_factors + u1 + u2))
        rep = minimal_framing_normalize(rep)
        validate(rep)
        return rep
    raise RuntimeError("no LDU-decomposable sample found")


def _unipotent_inverse_numeric(m: SymbolicMatrix) -> SymbolicMatrix:
    from .symbolic import unipotent_inverse
    return unipotent_inverse(m)

"""Shared builders for the test suite."""

from __future__ import annotations

from fractions import Fraction

from stokes_fourier.representation import StokesRepresentation, new_template
from stokes_fourier.symbolic import LaurentPoly


def template_like(rep: StokesRepresentation) -> StokesRepresentation:
    """Template with fresh symbols on the same base and strand order."""
    return new_template(rep.theta, rep.base, rep.strands)


def assignment_for(template: StokesRepresentation, rep: StokesRepresentation) -> dict[str, Fraction]:
    """Values that turn ``template`` into ``rep`` (both in minimal framing)."""
    out: dict[str, Fraction] = {}
    for x, y in zip(template.h.diag, rep.h.diag):
        if x.variables():
            (name,) = x.variables()
            out[name] = y.constant_value()
        else:
            assert x == y
    for f, g in zip(template.factors, rep.factors):
        for i, j in f.matrix.nonzero_offdiagonal():
            (name,) = f.matrix[i, j].variables()
            out[name] = g.matrix[i, j].constant_value() if not g.matrix[i, j].is_zero() else Fraction(0)
    return out


def poly(text: str) -> LaurentPoly:
    from stokes_fourier.symbolic import parse_poly
    return parse_poly(text)

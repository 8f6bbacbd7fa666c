"""Stokes data of irregular connections with one slope, and their Fourier transforms."""

from .circle_arith import CoverPoint, angle_normalize, frac_mod, signed_offset
from .errors import StokesError
from .examples import EXAMPLES, Example
from .fourier import FourierResult, fourier_pipeline, fourier_transform
from .irregular import ExponentCircle, IrregularClass, Modulus, distinguished_intervals, s0_points
from .legendre import formal_transform, legendre_class
from .representation import (
    StokesFactor,
    StokesRepresentation,
    Strand,
    deformation_data,
    formal_system,
    interior_transport,
    minimal_framing_normalize,
    new_template,
    validate,
)
from .stokes_geometry import singular_directions, stokes_arrows, stokes_directions, stokes_path
from .symbolic import LaurentPoly, MonomialMatrix, SymbolicMatrix, format_poly, parse_poly

__all__ = [
    "CoverPoint", "angle_normalize", "frac_mod", "signed_offset", "StokesError", "EXAMPLES", "Example",
    "FourierResult", "fourier_pipeline", "fourier_transform", "ExponentCircle", "IrregularClass",
    "Modulus", "distinguished_intervals", "s0_points", "formal_transform", "legendre_class",
    "StokesFactor", "StokesRepresentation", "Strand", "deformation_data", "formal_system",
    "interior_transport", "minimal_framing_normalize", "new_template", "validate",
    "singular_directions", "stokes_arrows", "stokes_directions", "stokes_path", "LaurentPoly",
    "MonomialMatrix", "SymbolicMatrix", "format_poly", "parse_poly",
]

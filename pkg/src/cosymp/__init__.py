"""Computational kernel for cosymplectic linear algebra and chart geometry.

Modules:
    matrices        exact (Fraction) and floating matrix helpers
    linear          cosymplectic vector spaces, orthogonals, classification
    constructions   Darboux bases, Lagrangian-like extensions, cocomplex maps
    charts          coordinate-chart models, submanifold checks, Moser flows
    torus           torus maps, Weinstein forms, flux comparisons
    cli             command-line front end
"""

from . import charts, constructions, errors, linear, matrices, torus
from .constructions import (
    canonical_isomorphism,
    cocomplex_from_metric,
    darboux_basis,
    extend_to_lagrangian,
    transverse_lagrangian,
)
from .linear import (
    CosymplecticSpace,
    Subspace,
    build_space,
    classify,
    musical,
    musical_inverse,
    orthogonal,
    pairing,
    standard_space,
    weil_space,
)

__all__ = [
    "CosymplecticSpace",
    "Subspace",
    "build_space",
    "canonical_isomorphism",
    "charts",
    "classify",
    "cli",
    "cocomplex_from_metric",
    "constructions",
    "darboux_basis",
    "errors",
    "extend_to_lagrangian",
    "linear",
    "matrices",
    "musical",
    "musical_inverse",
    "orthogonal",
    "pairing",
    "standard_space",
    "torus",
    "transverse_lagrangian",
    "weil_space",
]

__version__ = "1.0.0"

"""Numerical laboratory for locally eventually positive semigroups."""

from .approx_eigen import WeylParams, make_w, residual, weyl_decay_fit
from .example_semigroup import ExampleSemigroup, phi
from .lattice import (
    Grid,
    GridFunction,
    NormReport,
    dist_to_positive_cone,
    lattice_ops,
    norm_l1,
    norm_mixed,
    norm_sup,
    norms,
    translate,
)
from .localization import Localizer
from .polyharmonic import PolyharmonicFlow, WrapAroundError
from .resolvent import (
    QuadratureSpec,
    check_localized_resolvent_inequality,
    laplace_orbit,
    remainder_term,
    spectral_bound_probe,
)

__version__ = "0.1.0"

__all__ = [
    "ExampleSemigroup",
    "Grid",
    "GridFunction",
    "Localizer",
    "NormReport",
    "PolyharmonicFlow",
    "QuadratureSpec",
    "WeylParams",
    "WrapAroundError",
    "check_localized_resolvent_inequality",
    "dist_to_positive_cone",
    "laplace_orbit",
    "lattice_ops",
    "make_w",
    "norm_l1",
    "norm_mixed",
    "norm_sup",
    "norms",
    "phi",
    "remainder_term",
    "residual",
    "spectral_bound_probe",
    "translate",
    "weyl_decay_fit",
]

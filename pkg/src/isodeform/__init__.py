"""Isospectral deformations of torus bundles over spheres built from two-step nilpotent groups."""

from .matcore import NumericalError, ShapeError, char_poly, nullspace, sym_eigen
from .nilalg import (
    GroupPoint,
    RicciForm,
    SkewPencil,
    bracket,
    pencil_eval,
    ricci_form,
    scal_ambient,
)
from .family import BASE_PARAMS, DomainError, Example8Params, deform, interval_I
from .isospec import gw3_criterion, pencil_isospectral
from .boundary import BoundaryPoint, scal_at, scal_extremes, scal_via_shape
from .equiv import LatticeBasis, commutant_dimension, l_equivalence, lattice_automorphisms

__version__ = "0.1.0"

__all__ = [
    "BoundaryPoint",
    "DomainError",
    "Example8Params",
    "GroupPoint",
    "LatticeBasis",
    "NumericalError",
    "BASE_PARAMS",
    "RicciForm",
    "ShapeError",
    "SkewPencil",
    "bracket",
    "char_poly",
    "commutant_dimension",
    "deform",
    "gw3_criterion",
    "interval_I",
    "l_equivalence",
    "lattice_automorphisms",
    "nullspace",
    "pencil_eval",
    "pencil_isospectral",
    "ricci_form",
    "scal_ambient",
    "scal_at",
    "scal_extremes",
    "scal_via_shape",
    "sym_eigen",
]

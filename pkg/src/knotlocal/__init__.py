"""Local-field invariants of knot complements from ideal triangulations."""

__version__ = "0.1.0"

from . import fqcount, ident, realnum, triangulate
from .triangulate import (
    AffineForm,
    AngleFamily,
    DerivationError,
    GluingSystem,
    KinematicalData,
    Monomial,
    PeripheralSpec,
    Tetrahedron,
    Triangulation,
    TriangulationError,
    balance_angles,
    gluing_system,
    kinematical_data,
    nz_matrices,
    parse_triangulation,
)

__all__ = [
    "fqcount", "ident", "realnum", "triangulate",
    "AffineForm", "AngleFamily", "DerivationError", "GluingSystem",
    "KinematicalData", "Monomial", "PeripheralSpec", "Tetrahedron",
    "Triangulation", "TriangulationError", "balance_angles", "gluing_system",
    "kinematical_data", "nz_matrices", "parse_triangulation",
]

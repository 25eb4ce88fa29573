"""Stokes matrices of hypergeometric integrals over weighted hyperplane arrangements."""

from .arrangement import (
    AffineForm,
    Arrangement,
    Chamber,
    Edge,
    GenericityError,
    Geometry,
    Vertex,
    analyze,
    validate_genericity,
)
from .ode import ODESystem, build_ode
from .quadrature import IntegralValue, QuadConfig
from .stokes import StokesData, stokes_matrices

__all__ = [
    "AffineForm",
    "Arrangement",
    "Chamber",
    "Edge",
    "GenericityError",
    "Geometry",
    "IntegralValue",
    "ODESystem",
    "QuadConfig",
    "StokesData",
    "Vertex",
    "analyze",
    "build_ode",
    "stokes_matrices",
    "validate_genericity",
]

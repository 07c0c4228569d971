"""Exact pseudohermitian calculus on the 3-sphere and homogeneous CR 3-manifolds."""

from websterlab.scalars import Coefficient, IntegralValue
from websterlab.sphere import ModeSpec, SpherePoly, harmonic_basis, integrate
from websterlab.jets import JetOrderError, JetPoly

__all__ = [
    "Coefficient",
    "IntegralValue",
    "JetOrderError",
    "JetPoly",
    "ModeSpec",
    "SpherePoly",
    "harmonic_basis",
    "integrate",
]

__version__ = "0.1.0"

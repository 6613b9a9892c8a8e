"""Verification toolkit for twisted L-function identities: exact Hecke
eigenvalue tables, Dirichlet characters and Gauss sums, Bessel/quadrature
kernels, the circle-method machinery, both sides of the Voronoi summation
formula, exponential/convolution sums, and the experiment harness."""

from . import characters, circle, forms, special, sums, voronoi
from .errors import SubconvError

__version__ = "1.0.0"

__all__ = [
    "characters",
    "circle",
    "forms",
    "special",
    "sums",
    "voronoi",
    "SubconvError",
    "__version__",
]

"""Regions with density: quadrature moments, centroids, masses, transversals."""

from .core import (
    Constant,
    Estimate,
    FunctionDensity,
    Lamina,
    LaminaCentroid,
    RadialAffine,
    Transversal,
    area,
    balance_residuals,
    cosh_bound_line,
    cosh_bound_point,
    decompose_and_combine,
    delta_transversal,
    density_integral,
    density_max,
    first_moment,
    lamina_centroid,
    lamina_mass,
    lamina_moment,
)
from .quadrature import QuadratureConfig, QuadResult, integrate
from .regions import (
    Disk,
    GeodesicPolygon,
    GeodesicTriangle,
    PolarGraph,
    Region,
    RegularPolygon,
    Wedge,
    regular_polygon_vertices,
)

"""Closed-form masses and centroids of uniform unit-density shapes."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import DegenerateTriangle, InvalidPolygon, InvalidWedge
from .hcore import (
    HPoint,
    check_triangle,
    dist,
    intersect,
    line_through,
    point_along,
    signed_sinh_dist,
)


@dataclass(frozen=True)
class WedgeResult:
    d_n: float
    mass: float


def disk_mass(r: float) -> float:
    """``pi sinh^2 r``."""
    _positive(r)
    return math.pi * math.sinh(r) ** 2


def disk_area(r: float) -> float:
    """``4 pi sinh^2(r / 2)``."""
    _positive(r)
    return 4.0 * math.pi * math.sinh(r / 2.0) ** 2


def _sinh_minus_x(x: float) -> float:
    """``sinh x - x`` without cancellation for small ``x``."""
    if abs(x) < 1e-2:
        x2 = x * x
        return x * x2 / 6.0 * (1.0 + x2 / 20.0 * (1.0 + x2 / 42.0 * (1.0 + x2 / 72.0)))
    return math.sinh(x) - x


def wedge_ratio(r: float) -> float:
    """``(sinh 2r - 2r) / (cosh 2r - 1)``; the denominator is ``2 sinh^2 r``."""
    return _sinh_minus_x(2.0 * r) / (2.0 * math.sinh(r) ** 2)


def wedge_tanh(n: int, r: float) -> float:
    """``tanh d_n = (n / pi) sin(pi / n) (sinh 2r - 2r) / (cosh 2r - 1)``."""
    if n < 1:
        raise InvalidWedge("wedge count n must be >= 1")
    _positive(r)
    return n / math.pi * math.sin(math.pi / n) * wedge_ratio(r)


def wedge_centroid(n: int, r: float) -> WedgeResult:
    """Centroid distance from the apex and mass of the uniform wedge ``|theta| <= pi / n``."""
    k = wedge_tanh(n, r)
    if not 0.0 <= k < 1.0:
        raise InvalidWedge(f"tanh argument {k} outside [0, 1)")
    mass = math.pi * math.sinh(r) ** 2 / n * math.sqrt(1.0 - k * k)
    return WedgeResult(math.atanh(k), mass)


def segment_mass(d: float) -> float:
    """``2 sinh(d / 2)``, the mass of a uniform unit-density segment of length ``d``."""
    _positive(d)
    return 2.0 * math.sinh(d / 2.0)


def median_point(a: HPoint, b: HPoint, c: HPoint) -> HPoint:
    """Intersection of the medians from ``a`` and ``b``.

    Raises :class:`DegenerateTriangle` for flat triangles, and
    :class:`ArithmeticError` if the third median misses the point by more
    than 1e-10.
    """
    check_triangle(a, b, c)
    ma = point_along(b, c, dist(b, c) / 2.0)
    mb = point_along(c, a, dist(c, a) / 2.0)
    mc = point_along(a, b, dist(a, b) / 2.0)
    o = intersect(line_through(a, ma), line_through(b, mb))
    if o is None:
        raise DegenerateTriangle("medians do not meet")
    off = abs(math.asinh(signed_sinh_dist(line_through(c, mc), o)))
    if off > 1e-10:
        raise ArithmeticError(f"third median misses the median point by {off:.3e}")
    return o


def triangle_mass_terms(a: HPoint, b: HPoint, c: HPoint, center: Optional[HPoint] = None):
    """The three summands ``sinh d(O, X_i X_{i+1}) d(X_i, X_{i+1}) / 2``.

    ``O`` defaults to the median point.  With ``O`` the true centroid of the
    uniform triangle the sum is the triangle's mass.
    """
    o = median_point(a, b, c) if center is None else center
    verts = (a, b, c)
    terms = []
    for i in range(3):
        p, q = verts[i], verts[(i + 1) % 3]
        h = abs(signed_sinh_dist(line_through(p, q), o))
        terms.append(0.5 * h * dist(p, q))
    return tuple(terms)


def triangle_mass_formula(a: HPoint, b: HPoint, c: HPoint, center: Optional[HPoint] = None) -> float:
    return math.fsum(triangle_mass_terms(a, b, c, center))


def ngon_check(n: int, r: float) -> None:
    if n < 3:
        raise InvalidPolygon("regular polygon needs n >= 3")
    _positive(r)
    if not math.cosh(r) * math.sin(math.pi / n) < 1.0:
        raise InvalidPolygon(f"no regular {n}-gon with in-radius {r}")


def ngon_side(n: int, r: float) -> float:
    """Side ``a = 2 artanh(tan(pi / n) sinh r)`` of the regular n-gon of in-radius ``r``."""
    ngon_check(n, r)
    return 2.0 * math.atanh(math.tan(math.pi / n) * math.sinh(r))


def ngon_mass(n: int, r: float) -> float:
    """``n a sinh(r) / 2``: half the perimeter times ``sinh r``."""
    return n * ngon_side(n, r) * math.sinh(r) / 2.0


def ngon_half_angle(n: int, r: float) -> float:
    """Half interior angle ``beta = arccos(cosh r sin(pi / n))``."""
    ngon_check(n, r)
    return math.acos(math.cosh(r) * math.sin(math.pi / n))


def ngon_area(n: int, r: float) -> float:
    """``(n - 2) pi - 2 n beta``."""
    return (n - 2) * math.pi - 2 * n * ngon_half_angle(n, r)


def _positive(x: float) -> None:
    if not x > 0:
        raise ValueError(f"size parameter must be positive, got {x}")

"""Compact regions described in a polar chart about an interior anchor."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Tuple

import numpy as np
from scipy.interpolate import CubicSpline

from ..errors import InvalidPolygon, InvalidRegion, InvalidWedge
from ..hcore import (
    DEGENERATE_AREA,
    HPoint,
    dist_array,
    gauss_array,
    inverse_frame,
    lorentz_frame,
    mink,
    mink_cross,
    points_array,
    triangle_area,
)

TWO_PI = 2.0 * math.pi


class Region:
    """Base class: ``{(rho, theta) : theta in window, rho <= rho_max(theta)}``
    in the Gauss chart of ``anchor``.

    Subclasses provide ``anchor``, ``window``, ``breakpoints`` (angles where
    ``rho_max`` is not smooth, covering the window) and ``rho_max``.
    """

    anchor: HPoint

    @cached_property
    def frame(self) -> np.ndarray:
        return lorentz_frame(self.anchor)

    @cached_property
    def inverse(self) -> np.ndarray:
        return inverse_frame(self.frame)

    @property
    def window(self) -> Tuple[float, float]:
        bp = self.breakpoints()
        return float(bp[0]), float(bp[-1])

    def breakpoints(self) -> np.ndarray:
        raise NotImplementedError

    def rho_max(self, theta) -> np.ndarray:
        raise NotImplementedError

    def local_polar(self, x):
        """Chart angle (shifted into the window's 2*pi range) and radius of points."""
        loc = np.asarray(x, dtype=float).reshape(-1, 3) @ self.inverse.T
        rho = np.arcsinh(np.hypot(loc[:, 1], loc[:, 2]))
        theta0 = self.window[0]
        theta = theta0 + np.mod(np.arctan2(loc[:, 2], loc[:, 1]) - theta0, TWO_PI)
        return theta, rho

    def depth(self, x) -> np.ndarray:
        """Approximate signed distance to the boundary (positive inside)."""
        theta, rho = self.local_polar(x)
        lo, hi = self.window
        out = self.rho_max(np.minimum(theta, hi)) - rho
        if hi - lo < TWO_PI - 1e-12:
            ang = np.minimum(theta - lo, hi - theta)
            side = np.where(ang > math.pi / 2, np.inf,
                            np.arcsinh(np.sinh(rho) * np.sin(np.clip(ang, -math.pi / 2, None))))
            out = np.where(theta > hi, -np.minimum(theta - hi, TWO_PI - (theta - lo)) * np.sinh(rho) - 1e-300,
                           np.minimum(out, side))
        return out

    def contains(self, x, tol: float = 1e-9) -> np.ndarray:
        return self.depth(x) >= -tol

    def boundary_points(self, n: int = 720) -> np.ndarray:
        lo, hi = self.window
        theta = np.linspace(lo, hi, n)
        pts = gauss_array(theta, self.rho_max(theta)) @ self.frame.T
        if hi - lo < TWO_PI - 1e-12:
            pts = np.vstack([pts, self.anchor.vec[None, :]])
        return pts

    def diameter(self) -> float:
        pts = self.boundary_points(360)
        return float(np.max(dist_array(pts[:, None, :], pts[None, :, :])))


@dataclass(frozen=True, eq=False)
class GeodesicPolygon(Region):
    """Convex geodesic polygon with vertices listed in cyclic order."""

    vertices: Tuple[HPoint, ...]
    anchor: Optional[HPoint] = None

    def __post_init__(self):
        verts = tuple(self.vertices)
        if len(verts) < 3:
            raise InvalidPolygon("a polygon needs at least three vertices")
        object.__setattr__(self, "vertices", verts)
        if self.anchor is None:
            object.__setattr__(self, "anchor", HPoint.from_vector(np.sum(points_array(verts), axis=0)))
        loc = points_array(verts) @ self.inverse.T
        ang = np.arctan2(loc[:, 2], loc[:, 1])
        order = np.argsort(ang)
        n = len(verts)
        k = int(np.argmin(ang))
        ccw = [(k + i) % n for i in range(n)]
        cw = [(k - i) % n for i in range(n)]
        if list(order) not in (ccw, cw):
            raise InvalidPolygon("vertices are not in cyclic order around the anchor (non-convex?)")
        sorted_loc = loc[order]
        theta = ang[order]
        normals = []
        for i in range(n):
            p, q = sorted_loc[i], sorted_loc[(i + 1) % n]
            # counter-clockwise side: interior on the left, so flip to put it on the right
            w = -mink_cross(p, q - p)
            w = w / math.sqrt(mink(w, w))
            if w[0] <= 0:
                raise InvalidPolygon("anchor is not strictly inside the polygon")
            normals.append(w)
        normals = np.array(normals)
        # convexity: every vertex on the inner side of every side line
        if np.any(loc @ (normals * np.array([-1.0, 1.0, 1.0])).T > 1e-9 * np.max(loc[:, :1])):
            raise InvalidPolygon("polygon is not convex")
        object.__setattr__(self, "_theta", np.append(theta, theta[0] + TWO_PI))
        object.__setattr__(self, "_normals", normals)
        object.__setattr__(self, "_global_normals", normals @ self.frame.T)

    def breakpoints(self) -> np.ndarray:
        return self._theta

    def rho_max(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        t0 = self._theta[0]
        rel = t0 + np.mod(theta - t0, TWO_PI)
        # theta at the window end belongs to the last side
        rel = np.where((rel == t0) & (theta > t0), t0 + TWO_PI, rel)
        idx = np.clip(np.searchsorted(self._theta, rel, side="right") - 1, 0, len(self._normals) - 1)
        n = self._normals[idx]
        den = n[..., 1] * np.cos(theta) + n[..., 2] * np.sin(theta)
        return np.arctanh(np.clip(n[..., 0] / den, 0.0, 1.0 - 1e-16))

    def side_normals(self) -> np.ndarray:
        """Global unit normals of the sides, interior on the right."""
        return self._global_normals

    def depth(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float).reshape(-1, 3)
        vals = mink(x[:, None, :], self._global_normals[None, :, :])
        return np.min(np.arcsinh(-vals), axis=1)

    def boundary_points(self, n: int = 720) -> np.ndarray:
        return points_array(self.vertices)

    def area_exact(self) -> float:
        """Angle-defect area computed from a fan of triangles."""
        v = self.vertices
        return float(sum(triangle_area(v[0], v[i], v[i + 1]) for i in range(1, len(v) - 1)))


@dataclass(frozen=True, eq=False)
class GeodesicTriangle(GeodesicPolygon):
    """Triangle anchored at its median intersection ``(A + B + C)`` normalised."""

    def __init__(self, a: HPoint, b: HPoint, c: HPoint):
        GeodesicPolygon.__init__(self, (a, b, c), None)

    def __post_init__(self):
        if triangle_area(*self.vertices) < DEGENERATE_AREA:
            from ..errors import DegenerateTriangle
            raise DegenerateTriangle("triangle area below 1e-10")
        super().__post_init__()


def regular_polygon_vertices(center: HPoint, n: int, inradius: float,
                             rotation: float = 0.0) -> Tuple[HPoint, ...]:
    """Vertices of the regular ``n``-gon whose side midpoints sit at chart angles
    ``rotation + 2 pi k / n`` around ``center``."""
    if n < 3:
        raise InvalidPolygon("regular polygon needs n >= 3")
    if not inradius > 0 or not math.cosh(inradius) * math.sin(math.pi / n) < 1.0:
        raise InvalidPolygon(f"no regular {n}-gon with in-radius {inradius}")
    circ = math.atanh(math.tanh(inradius) / math.cos(math.pi / n))
    ang = rotation + (2 * np.arange(n) + 1) * math.pi / n
    loc = gauss_array(ang, circ) @ lorentz_frame(center).T
    return tuple(HPoint.from_vector(p) for p in loc)


@dataclass(frozen=True, eq=False)
class RegularPolygon(GeodesicPolygon):
    n: int = 3
    inradius: float = 1.0
    rotation: float = 0.0

    def __init__(self, center: HPoint, n: int, inradius: float, rotation: float = 0.0):
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "inradius", float(inradius))
        object.__setattr__(self, "rotation", float(rotation))
        GeodesicPolygon.__init__(self, regular_polygon_vertices(center, n, inradius, rotation), center)

    @property
    def center(self) -> HPoint:
        return self.anchor


@dataclass(frozen=True, eq=False)
class Disk(Region):
    center: HPoint
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise InvalidRegion("disk radius must be positive")

    @property
    def anchor(self) -> HPoint:
        return self.center

    def breakpoints(self) -> np.ndarray:
        return np.linspace(0.0, TWO_PI, 5)

    def rho_max(self, theta) -> np.ndarray:
        return np.full(np.shape(theta), self.radius)

    def depth(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float).reshape(-1, 3)
        return self.radius - dist_array(x, self.center.vec[None, :])

    def diameter(self) -> float:
        return 2.0 * self.radius


@dataclass(frozen=True, eq=False)
class Wedge(Region):
    """Sector ``theta1 <= theta <= theta2``, ``rho <= radius`` of the chart at ``center``."""

    center: HPoint
    radius: float
    theta1: float
    theta2: float

    def __post_init__(self):
        if not self.radius > 0:
            raise InvalidWedge("wedge radius must be positive")
        if not 0.0 < self.theta2 - self.theta1 <= TWO_PI + 1e-15:
            raise InvalidWedge("wedge angle window must have width in (0, 2 pi]")

    @classmethod
    def sector(cls, n: int, radius: float, center: Optional[HPoint] = None,
               axis: float = 0.0) -> "Wedge":
        """The wedge ``|theta - axis| <= pi / n``."""
        if n < 1:
            raise InvalidWedge("sector count must be >= 1")
        c = HPoint.origin() if center is None else center
        return cls(c, radius, axis - math.pi / n, axis + math.pi / n)

    @property
    def anchor(self) -> HPoint:
        return self.center

    def breakpoints(self) -> np.ndarray:
        k = max(1, int(math.ceil((self.theta2 - self.theta1) / (math.pi / 2) - 1e-12)))
        return np.linspace(self.theta1, self.theta2, k + 1)

    def rho_max(self, theta) -> np.ndarray:
        return np.full(np.shape(theta), self.radius)


@dataclass(frozen=True, eq=False)
class PolarGraph(Region):
    """Star region ``rho <= f(theta)`` about ``center``; ``f`` is the periodic
    cubic spline through ``radii`` sampled at ``theta_k = 2 pi k / N``."""

    center: HPoint
    radii: Tuple[float, ...]

    def __post_init__(self):
        r = np.asarray(self.radii, dtype=float)
        if r.ndim != 1 or len(r) < 3 or np.any(r <= 0):
            raise InvalidRegion("polar graph needs at least three positive radii")
        object.__setattr__(self, "radii", tuple(float(x) for x in r))
        knots = np.linspace(0.0, TWO_PI, len(r) + 1)
        spline = CubicSpline(knots, np.append(r, r[0]), bc_type="periodic")
        if np.min(spline(np.linspace(0.0, TWO_PI, 16 * len(r)))) <= 0:
            raise InvalidRegion("interpolated boundary reaches the centre")
        object.__setattr__(self, "_spline", spline)
        object.__setattr__(self, "_knots", knots)

    @property
    def anchor(self) -> HPoint:
        return self.center

    def breakpoints(self) -> np.ndarray:
        return self._knots

    def rho_max(self, theta) -> np.ndarray:
        return self._spline(np.mod(np.asarray(theta, dtype=float), TWO_PI))

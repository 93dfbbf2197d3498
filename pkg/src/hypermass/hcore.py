"""Points, lines and trigonometry of the hyperbolic plane.

Every point is stored on the upper sheet of the hyperboloid
``t^2 - u^2 - v^2 = 1`` in 2+1 Minkowski space with bilinear form
``<a, b> = -a_t b_t + a_u b_u + a_v b_v``.  A directed geodesic is stored
as the unit spacelike normal ``n`` of the plane cutting it out, so that

    <X, n> = sigma_m(X) * sinh d(X, m)

holds exactly.  Points with ``<X, n> > 0`` lie on the left of the line.

Four user-facing coordinate models convert to and from this representation:
hyperboloid ``(t, u, v)``, Poincare disk ``(x, y)``, upper half-plane
``(x, y)`` and Gauss polar ``(rho, theta)`` (metric ``drho^2 + sinh^2 rho
dtheta^2``).  The disk and the Gauss chart share the origin and the angle;
the half-plane is attached to the disk by the Cayley map
``z = (w - i) / (w + i)`` so that ``i`` is the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from .errors import (
    CoincidentPoints,
    DegenerateConfiguration,
    DegenerateTriangle,
    FootOffLine,
    OutOfDomain,
)

POINT_TOL = 1e-12
COINCIDENT_TOL = 1e-12
DEGENERATE_AREA = 1e-10
ON_LINE_TOL = 1e-9

_J = np.array([-1.0, 1.0, 1.0])


# ---------------------------------------------------------------------------
# Minkowski algebra (vectorised over the last axis)
# ---------------------------------------------------------------------------

def mink(a, b):
    """Minkowski bilinear form, broadcasting over leading axes."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return -a[..., 0] * b[..., 0] + a[..., 1] * b[..., 1] + a[..., 2] * b[..., 2]


def mink_cross(a, b):
    """Vector ``w`` with ``<w, c> = det[a, b, c]`` for every ``c``."""
    return np.cross(np.asarray(a, dtype=float), np.asarray(b, dtype=float)) * _J


def normalize_timelike(w):
    """Scale timelike vector(s) onto the upper sheet of the hyperboloid."""
    w = np.asarray(w, dtype=float)
    q = -mink(w, w)
    if np.any(q <= 0):
        raise OutOfDomain("vector is not timelike")
    out = w / np.sqrt(q)[..., None]
    return np.where(out[..., :1] < 0, -out, out)


def dist_array(a, b):
    """Hyperbolic distance between arrays of hyperboloid vectors.

    ``arcosh(-<a, b>)`` loses half the digits near zero, so short distances
    go through ``2 asinh(|a - b|_M / 2)`` instead.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = -mink(a, b)
    diff = a - b
    q = np.maximum(mink(diff, diff), 0.0)
    near = 2.0 * np.arcsinh(np.sqrt(q) / 2.0)
    far = np.arccosh(np.maximum(c, 1.0))
    return np.where(c < 2.0, near, far)


# ---------------------------------------------------------------------------
# Points and coordinate models
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HPoint:
    """A point of the hyperbolic plane in hyperboloid coordinates."""

    t: float
    u: float
    v: float

    def __post_init__(self):
        t, u, v = float(self.t), float(self.u), float(self.v)
        if not (math.isfinite(t) and math.isfinite(u) and math.isfinite(v)):
            raise OutOfDomain("non-finite hyperboloid coordinates")
        if t <= 0:
            raise OutOfDomain("hyperboloid point must have t > 0")
        # relative to t^2: far points cannot satisfy an absolute 1e-12
        if abs((t - u) * (t + u) - v * v - 1.0) > POINT_TOL * max(1.0, t * t):
            raise OutOfDomain(f"({t}, {u}, {v}) is not on the hyperboloid")

    @property
    def vec(self) -> np.ndarray:
        return np.array([self.t, self.u, self.v])

    @classmethod
    def from_vector(cls, w) -> "HPoint":
        """Normalise a timelike vector and return the corresponding point."""
        n = normalize_timelike(np.asarray(w, dtype=float))
        u, v = float(n[1]), float(n[2])
        return cls(math.sqrt(1.0 + u * u + v * v), u, v)

    @classmethod
    def origin(cls) -> "HPoint":
        return cls(1.0, 0.0, 0.0)

    @classmethod
    def from_gauss(cls, rho: float, theta: float) -> "HPoint":
        return to_hpoint(GaussPolar(rho, theta))

    @classmethod
    def from_disk(cls, x: float, y: float) -> "HPoint":
        return to_hpoint(PoincareDisk(x, y))

    @classmethod
    def from_half_plane(cls, x: float, y: float) -> "HPoint":
        return to_hpoint(HalfPlane(x, y))

    def gauss(self) -> "GaussPolar":
        return from_hpoint(self, "gauss-polar")

    def disk(self) -> "PoincareDisk":
        return from_hpoint(self, "poincare")

    def half_plane(self) -> "HalfPlane":
        return from_hpoint(self, "half-plane")


@dataclass(frozen=True)
class Hyperboloid:
    t: float
    u: float
    v: float


@dataclass(frozen=True)
class PoincareDisk:
    x: float
    y: float

    def __post_init__(self):
        if not self.x * self.x + self.y * self.y < 1.0:
            raise OutOfDomain(f"disk point ({self.x}, {self.y}) has radius >= 1")


@dataclass(frozen=True)
class HalfPlane:
    x: float
    y: float

    def __post_init__(self):
        if not self.y > 0.0:
            raise OutOfDomain(f"half-plane point ({self.x}, {self.y}) has y <= 0")


@dataclass(frozen=True)
class GaussPolar:
    rho: float
    theta: float

    def __post_init__(self):
        if not self.rho >= 0.0:
            raise OutOfDomain(f"Gauss polar radius {self.rho} is negative")


ModelCoords = Union[Hyperboloid, PoincareDisk, HalfPlane, GaussPolar]

MODELS = {
    "hyperboloid": Hyperboloid,
    "poincare": PoincareDisk,
    "half-plane": HalfPlane,
    "gauss-polar": GaussPolar,
}


def model_tag(coords: ModelCoords) -> str:
    for tag, cls in MODELS.items():
        if isinstance(coords, cls):
            return tag
    raise TypeError(f"unknown coordinate model {type(coords).__name__}")


def make_coords(tag: str, values: Sequence[float]) -> ModelCoords:
    """Build model coordinates from a tag and a flat sequence of numbers."""
    try:
        cls = MODELS[tag]
    except KeyError:
        raise ValueError(f"unknown model {tag!r}; expected one of {sorted(MODELS)}")
    return cls(*(float(x) for x in values))


def to_hpoint(coords: ModelCoords) -> HPoint:
    if isinstance(coords, HPoint):
        return coords
    if isinstance(coords, Hyperboloid):
        return HPoint(coords.t, coords.u, coords.v)
    if isinstance(coords, GaussPolar):
        s = math.sinh(coords.rho)
        return HPoint(math.cosh(coords.rho), s * math.cos(coords.theta),
                      s * math.sin(coords.theta))
    if isinstance(coords, PoincareDisk):
        x, y = coords.x, coords.y
        r2 = x * x + y * y
        d = 1.0 - r2
        return HPoint.from_vector([(1.0 + r2) / d, 2.0 * x / d, 2.0 * y / d])
    if isinstance(coords, HalfPlane):
        x, y = coords.x, coords.y
        r2 = x * x + y * y
        return HPoint.from_vector([(1.0 + r2) / (2.0 * y), (r2 - 1.0) / (2.0 * y), -x / y])
    raise TypeError(f"unknown coordinate model {type(coords).__name__}")


def _wrap_angle(theta: float) -> float:
    """Map an angle into (-pi, pi]."""
    theta = math.atan2(math.sin(theta), math.cos(theta)) if abs(theta) > math.pi else theta
    return math.pi if theta <= -math.pi else theta


def from_hpoint(p: HPoint, tag: str) -> ModelCoords:
    t, u, v = p.t, p.u, p.v
    if tag == "hyperboloid":
        return Hyperboloid(t, u, v)
    if tag == "gauss-polar":
        r = math.hypot(u, v)
        if r == 0.0:
            return GaussPolar(0.0, 0.0)
        return GaussPolar(math.asinh(r), _wrap_angle(math.atan2(v, u)))
    if tag == "poincare":
        return PoincareDisk(u / (1.0 + t), v / (1.0 + t))
    if tag == "half-plane":
        # t - u cancels when u ~ t; (t^2 - u^2) = 1 + v^2 avoids it
        tmu = (1.0 + v * v) / (t + u) if u > 0 else t - u
        return HalfPlane(-v / tmu, 1.0 / tmu)
    raise ValueError(f"unknown model {tag!r}; expected one of {sorted(MODELS)}")


def convert(coords: ModelCoords, target: str) -> ModelCoords:
    """Re-express ``coords`` in the model named ``target``."""
    return from_hpoint(to_hpoint(coords), target)


def points_array(points: Sequence[HPoint]) -> np.ndarray:
    return np.array([[p.t, p.u, p.v] for p in points], dtype=float).reshape(-1, 3)


def disk_array(x):
    """Poincare-disk coordinates of an array of hyperboloid vectors."""
    x = np.asarray(x, dtype=float)
    return x[..., 1:] / (1.0 + x[..., :1])


def from_disk_array(z):
    z = np.asarray(z, dtype=float)
    r2 = np.sum(z * z, axis=-1)
    d = 1.0 - r2
    return np.stack([(1.0 + r2) / d, 2.0 * z[..., 0] / d, 2.0 * z[..., 1] / d], axis=-1)


def gauss_array(theta, rho):
    """Hyperboloid vectors of Gauss polar coordinates (broadcasting)."""
    rho = np.asarray(rho, dtype=float)
    theta = np.asarray(theta, dtype=float)
    s = np.sinh(rho)
    return np.stack(np.broadcast_arrays(np.cosh(rho), s * np.cos(theta), s * np.sin(theta)),
                    axis=-1)


# ---------------------------------------------------------------------------
# Distances and lines
# ---------------------------------------------------------------------------

def dist(a: HPoint, b: HPoint) -> float:
    """Hyperbolic distance between two points."""
    return float(dist_array(a.vec, b.vec))


@dataclass(frozen=True)
class DirectedLine:
    """An oriented geodesic given by its unit spacelike normal.

    The left half-plane is ``{X : <X, n> > 0}``.
    """

    t: float
    u: float
    v: float

    def __post_init__(self):
        t, u, v = float(self.t), float(self.u), float(self.v)
        norm = -t * t + u * u + v * v
        if abs(norm - 1.0) > POINT_TOL * max(1.0, u * u + v * v):
            raise OutOfDomain(f"({t}, {u}, {v}) is not a unit spacelike normal")

    @property
    def normal(self) -> np.ndarray:
        return np.array([self.t, self.u, self.v])

    @classmethod
    def from_normal(cls, w) -> "DirectedLine":
        w = np.asarray(w, dtype=float)
        q = mink(w, w)
        if q <= 0:
            raise OutOfDomain("line normal must be spacelike")
        w = w / math.sqrt(q)
        return cls(float(w[0]), float(w[1]), float(w[2]))

    def reverse(self) -> "DirectedLine":
        return DirectedLine(-self.t, -self.u, -self.v)

    def side(self, x: HPoint, tol: float = POINT_TOL) -> int:
        """The side function sigma: +1 left, -1 right, 0 on the line."""
        s = signed_sinh_dist(self, x)
        if abs(s) <= tol * x.t:
            return 0
        return 1 if s > 0 else -1

    def base_point(self) -> HPoint:
        """Closest point of the line to the hyperboloid origin."""
        return foot_of_perpendicular(self, HPoint.origin())

    def tangent(self, at: Optional[HPoint] = None) -> np.ndarray:
        """Unit tangent vector at ``at`` (default: base point), along the orientation."""
        p = self.base_point() if at is None else at
        return mink_cross(self.normal, p.vec)

    def point_at(self, s) -> np.ndarray:
        """Hyperboloid vector(s) at signed arclength ``s`` from the base point."""
        f = self.base_point().vec
        tg = mink_cross(self.normal, f)
        s = np.asarray(s, dtype=float)
        return np.cosh(s)[..., None] * f + np.sinh(s)[..., None] * tg

    def arclength(self, x) -> np.ndarray:
        """Signed arclength of point vector(s) on the line from the base point."""
        f = self.base_point().vec
        tg = mink_cross(self.normal, f)
        return np.arcsinh(mink(np.asarray(x, dtype=float), tg))


def line_through(a: HPoint, b: HPoint) -> DirectedLine:
    """The geodesic through ``a`` and ``b`` directed from ``a`` to ``b``."""
    if dist(a, b) < COINCIDENT_TOL:
        raise CoincidentPoints("line_through needs two distinct points")
    av, bv = a.vec, b.vec
    # cross(a, b) == cross(a, b - a); the latter avoids cancellation
    return DirectedLine.from_normal(mink_cross(av, bv - av))


def signed_sinh_dist(m: DirectedLine, x: HPoint) -> float:
    """``sigma_m(x) * sinh d(x, m)``."""
    return float(mink(x.vec, m.normal))


def foot_of_perpendicular(m: DirectedLine, x: HPoint) -> HPoint:
    n = m.normal
    xv = x.vec
    return HPoint.from_vector(xv - mink(xv, n) * n)


def _unit_tangent(av, bv):
    """Unit tangent at ``a`` pointing to ``b`` and the distance d(a, b)."""
    diff = bv - av
    q = mink(diff, diff)
    w = diff - 0.5 * q * av
    w = w + mink(w, av) * av
    d = float(dist_array(av, bv))
    # own norm rather than sinh(d): exact unit length even when d is tiny
    return w / math.sqrt(mink(w, w)), d


def point_along(a: HPoint, b: HPoint, s: float) -> HPoint:
    """Point at arclength ``s`` from ``a`` on the ray towards ``b``."""
    if dist(a, b) < COINCIDENT_TOL:
        raise CoincidentPoints("point_along needs two distinct points")
    tg, _ = _unit_tangent(a.vec, b.vec)
    return HPoint.from_vector(math.cosh(s) * a.vec + math.sinh(s) * tg)


def midpoint(a: HPoint, b: HPoint) -> HPoint:
    return point_along(a, b, dist(a, b) / 2.0)


def intersect(m1: DirectedLine, m2: DirectedLine) -> Optional[HPoint]:
    """Intersection point of two geodesics, or None if they do not meet."""
    w = mink_cross(m1.normal, m2.normal)
    if mink(w, w) >= 0:
        return None
    return HPoint.from_vector(w if w[0] > 0 else -w)


def lorentz_frame(p: HPoint) -> np.ndarray:
    """Boost matrix ``B`` (Minkowski isometry) with ``B @ origin = p``.

    ``B`` carries the Gauss polar chart at the origin to a chart at ``p``.
    """
    t, u, v = p.t, p.u, p.v
    k = 1.0 / (1.0 + t)
    return np.array([
        [t, u, v],
        [u, 1.0 + u * u * k, u * v * k],
        [v, u * v * k, 1.0 + v * v * k],
    ])


def inverse_frame(frame: np.ndarray) -> np.ndarray:
    """Inverse of a Minkowski isometry: ``J B^T J``."""
    return (frame.T * _J[None, :]) * _J[:, None]


def line_through_point(p: HPoint, angle: float) -> DirectedLine:
    """Line through ``p`` heading in direction ``angle`` of the chart at ``p``."""
    n = lorentz_frame(p) @ np.array([0.0, -math.sin(angle), math.cos(angle)])
    return DirectedLine.from_normal(n)


def ideal_endpoints(m: DirectedLine) -> Tuple[float, float]:
    """Boundary angles (disk model) of the backward and forward ideal ends."""
    f = m.base_point().vec
    tg = mink_cross(m.normal, f)
    back = f - tg
    fwd = f + tg
    return (math.atan2(back[2], back[1]), math.atan2(fwd[2], fwd[1]))


@dataclass(frozen=True)
class GaussGeodesic:
    """A geodesic in the Gauss chart.

    Non-radial: ``rho = arcoth(C cos(theta - alpha))`` with ``C > 1``.
    Radial (``C is None``): the full line ``theta = alpha`` / ``alpha + pi``.
    """

    C: Optional[float]
    alpha: float

    def __post_init__(self):
        if self.C is not None and not self.C > 1.0:
            raise OutOfDomain("Gauss geodesic needs C > 1")

    @property
    def radial(self) -> bool:
        return self.C is None

    def origin_distance(self) -> float:
        return 0.0 if self.C is None else math.atanh(1.0 / self.C)

    def rho(self, theta):
        """Radius on the curve at angle ``theta`` (NaN where it does not reach)."""
        if self.C is None:
            raise ValueError("radial geodesic has no rho(theta)")
        c = self.C * np.cos(np.asarray(theta, dtype=float) - self.alpha)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(c > 1.0, np.arctanh(1.0 / c), np.nan)

    def to_line(self) -> DirectedLine:
        """Directed line on the same point set; non-radial ones keep the origin on the right."""
        if self.C is None:
            return DirectedLine.from_normal([0.0, -math.sin(self.alpha), math.cos(self.alpha)])
        c, a = self.C, self.alpha
        return DirectedLine.from_normal([1.0, c * math.cos(a), c * math.sin(a)])

    @classmethod
    def from_line(cls, m: DirectedLine) -> "GaussGeodesic":
        nt, nu, nv = m.t, m.u, m.v
        if abs(nt) <= POINT_TOL:
            return cls(None, _wrap_angle(math.atan2(nv, nu) - math.pi / 2.0))
        s = 1.0 if nt > 0 else -1.0
        return cls(math.hypot(nu, nv) / abs(nt), math.atan2(s * nv, s * nu))


# ---------------------------------------------------------------------------
# Triangles and the classical theorems
# ---------------------------------------------------------------------------

def _angle_at(av, bv, cv) -> float:
    tb, _ = _unit_tangent(av, bv)
    tc, _ = _unit_tangent(av, cv)
    sin_part = abs(float(np.linalg.det(np.stack([av, tb, tc]))))
    return math.atan2(sin_part, float(mink(tb, tc)))


def triangle_angles(a: HPoint, b: HPoint, c: HPoint) -> Tuple[float, float, float]:
    """Interior angles at ``a``, ``b`` and ``c``."""
    for p, q in ((a, b), (b, c), (c, a)):
        if dist(p, q) < COINCIDENT_TOL:
            raise DegenerateTriangle("triangle has coincident vertices")
    av, bv, cv = a.vec, b.vec, c.vec
    return (_angle_at(av, bv, cv), _angle_at(bv, cv, av), _angle_at(cv, av, bv))


def triangle_area(a: HPoint, b: HPoint, c: HPoint) -> float:
    """Angle defect ``pi - (alpha + beta + gamma)``."""
    return math.pi - sum(triangle_angles(a, b, c))


def check_triangle(a: HPoint, b: HPoint, c: HPoint) -> None:
    if triangle_area(a, b, c) < DEGENERATE_AREA:
        raise DegenerateTriangle("triangle area below 1e-10")


def law_of_cosines(b: float, c: float, alpha: float) -> float:
    """Side opposite ``alpha`` given the two sides enclosing it.

    Uses ``cosh a = cosh b cosh c - cos(alpha) sinh b sinh c`` rewritten as
    ``sinh^2(a/2) = sinh^2((b-c)/2) + sin^2(alpha/2) sinh b sinh c``, which is
    the same identity without the arcosh-near-1 cancellation.
    """
    h = math.sinh((b - c) / 2.0) ** 2 + math.sin(alpha / 2.0) ** 2 * math.sinh(b) * math.sinh(c)
    return 2.0 * math.asinh(math.sqrt(max(h, 0.0)))


def law_of_sines_residual(a: HPoint, b: HPoint, c: HPoint) -> float:
    """Relative spread of ``sinh(side) / sin(opposite angle)`` over the three sides."""
    check_triangle(a, b, c)
    alpha, beta, gamma = triangle_angles(a, b, c)
    ratios = np.array([
        math.sinh(dist(b, c)) / math.sin(alpha),
        math.sinh(dist(c, a)) / math.sin(beta),
        math.sinh(dist(a, b)) / math.sin(gamma),
    ])
    return float((ratios.max() - ratios.min()) / ratios.mean())


def _side_ratio(x: HPoint, y: HPoint, p: HPoint) -> float:
    """Signed ``sinh(XP) / sinh(PY)`` for ``p`` on the extended side ``XY``."""
    m = line_through(x, y)
    if abs(math.asinh(signed_sinh_dist(m, p))) > ON_LINE_TOL:
        raise FootOffLine("point is not on the side geodesic")
    sx, sy, sp = (float(m.arclength(q.vec)) for q in (x, y, p))
    num = math.sinh(sp - sx)
    den = math.sinh(sy - sp)
    scale = math.sinh(abs(sy - sx))
    if abs(num) <= COINCIDENT_TOL * scale or abs(den) <= COINCIDENT_TOL * scale:
        raise DegenerateConfiguration("a foot coincides with a vertex")
    return num / den


def _ratio_product(tri, p, q, r) -> float:
    a, b, c = tri
    return _side_ratio(a, b, r) * _side_ratio(b, c, p) * _side_ratio(c, a, q)


def ceva_product(tri: Sequence[HPoint], p: HPoint, q: HPoint, r: HPoint) -> float:
    """Signed Ceva product for feet ``p`` on BC, ``q`` on CA, ``r`` on AB.

    Equals 1 exactly when the cevians AP, BQ, CR are concurrent.
    """
    return _ratio_product(tri, p, q, r)


def menelaus_product(tri: Sequence[HPoint], p: HPoint, q: HPoint, r: HPoint) -> float:
    """Signed Menelaus product; equals -1 exactly when p, q, r are collinear."""
    return _ratio_product(tri, p, q, r)

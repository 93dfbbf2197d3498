"""Point-masses, the centroid operation ``*`` and moments.

A point-mass ``(X, x)`` is a location with a positive weight.  The centroid
``(X, x) * (Y, y) = (Z, z)`` puts ``Z`` between ``X`` and ``Y`` with
``x sinh XZ = y sinh YZ`` and ``z = x cosh XZ + y cosh YZ``.  In hyperboloid
coordinates this is exactly the weighted sum ``w = x X + y Y``: ``Z`` is the
normalisation of ``w`` and ``z`` its Minkowski length.  That closed form makes
``*`` commutative bit-for-bit and associative up to rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from .errors import CoincidentPoints, EqualWeights, NoExternalCentroid
from .hcore import (
    COINCIDENT_TOL,
    DirectedLine,
    HPoint,
    dist,
    dist_array,
    mink,
    points_array,
)


@dataclass(frozen=True)
class PointMass:
    location: HPoint
    weight: float

    def __post_init__(self):
        if not (self.weight > 0 and math.isfinite(self.weight)):
            raise ValueError(f"point-mass weight must be positive, got {self.weight}")

    @property
    def vector(self) -> np.ndarray:
        """Weighted hyperboloid vector ``x * X``."""
        return self.weight * self.location.vec

    @classmethod
    def from_vector(cls, w) -> "PointMass":
        """Point-mass whose weighted vector is the timelike vector ``w``."""
        w = np.asarray(w, dtype=float)
        z = math.sqrt(-float(mink(w, w)))
        return cls(HPoint.from_vector(w), z)


class PointMassSystem(tuple):
    """Immutable, non-empty, ordered collection of point-masses."""

    def __new__(cls, masses: Iterable[PointMass]):
        masses = tuple(masses)
        if not masses:
            raise ValueError("a point-mass system needs at least one element")
        for pm in masses:
            if not isinstance(pm, PointMass):
                raise TypeError(f"expected PointMass, got {type(pm).__name__}")
        return super().__new__(cls, masses)

    @property
    def locations(self) -> np.ndarray:
        return points_array([pm.location for pm in self])

    @property
    def weights(self) -> np.ndarray:
        return np.array([pm.weight for pm in self])

    def total_weight(self) -> float:
        return float(np.sum(self.weights))


@dataclass(frozen=True)
class LeverForce:
    """A force of magnitude ``magnitude`` perpendicular to a lever at signed ``offset``."""

    magnitude: float
    offset: float

    def __post_init__(self):
        if not self.magnitude > 0:
            raise ValueError("lever force magnitude must be positive")


def moment_about_point(pm: PointMass, n: HPoint) -> float:
    return pm.weight * math.sinh(dist(pm.location, n))


def moment_about_line(pm: PointMass, m: DirectedLine) -> float:
    """Signed moment ``sigma_m(X) x sinh d(X, m)``."""
    return pm.weight * float(mink(pm.location.vec, m.normal))


def combine(p: PointMass, q: PointMass) -> PointMass:
    """The centroid ``p * q``."""
    if p.location == q.location:
        return PointMass(p.location, p.weight + q.weight)
    w = p.vector + q.vector
    if dist(p.location, q.location) < COINCIDENT_TOL:
        # symmetric in p and q, like the general branch
        return PointMass(HPoint.from_vector(w), p.weight + q.weight)
    return PointMass.from_vector(w)


def external_centroid(p: PointMass, q: PointMass) -> PointMass:
    """External balance point of ``p`` and ``q`` on the line through them.

    The point ``Z`` lies beyond the heavier mass.  Writing ``r`` for the
    weight ratio (heavier over lighter) and ``d = XY``, a finite ``Z`` exists
    only when ``r > e^d``; otherwise the balance point is ideal and
    :class:`NoExternalCentroid` is raised (:class:`EqualWeights` for ``r = 1``).
    """
    x, y = p.weight, q.weight
    if dist(p.location, q.location) < COINCIDENT_TOL:
        raise CoincidentPoints("external centroid of coincident locations")
    if abs(x - y) / max(x, y) < 1e-12:
        raise EqualWeights("equal weights have no finite external centroid")
    w = p.vector - q.vector
    if -float(mink(w, w)) <= 0.0:
        d = dist(p.location, q.location)
        raise NoExternalCentroid(
            f"weight ratio {max(x, y) / min(x, y):.6g} does not exceed e^d = {math.exp(d):.6g}")
    return PointMass.from_vector(w if w[0] > 0 else -w)


def system_centroid(s: Sequence[PointMass]) -> PointMass:
    """Centroid of a finite system as the left fold of :func:`combine`."""
    s = PointMassSystem(s)
    return reduce(combine, s)


def system_mass_direct(s: Sequence[PointMass], c: HPoint) -> float:
    """``sum x_i cosh d(X_i, c)`` for a caller-supplied centroid location ``c``."""
    s = PointMassSystem(s)
    d = dist_array(s.locations, c.vec[None, :])
    return float(np.sum(s.weights * np.cosh(d)))


def system_moment(s: Sequence[PointMass], m: DirectedLine) -> float:
    s = PointMassSystem(s)
    return float(np.sum(s.weights * mink(s.locations, m.normal[None, :])))


def unsigned_moment(s: Sequence[PointMass], m: DirectedLine) -> float:
    s = PointMassSystem(s)
    return float(np.sum(s.weights * np.abs(mink(s.locations, m.normal[None, :]))))


def is_balanced(s: Sequence[PointMass], m: DirectedLine, tol: float) -> bool:
    """True when ``|M_m(s)|`` is at most ``tol`` times the total unsigned moment.

    A rounding floor proportional to the size of the summed terms keeps
    systems lying on ``m`` (zero unsigned moment) balanced.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    s = PointMassSystem(s)
    norms = np.linalg.norm(s.locations, axis=1) * float(np.linalg.norm(m.normal))
    floor = 8 * np.finfo(float).eps * float(np.sum(s.weights * norms))
    return abs(system_moment(s, m)) <= tol * unsigned_moment(s, m) + floor


def lever_resultant(f1: LeverForce, f2: LeverForce) -> Tuple[float, float]:
    """Pivot offset and magnitude of the resultant of two perpendicular forces.

    Offsets are signed arclengths along the lever.  The forces are placed as
    point-masses on a geodesic and combined with ``*``; the resultant acts at
    the centroid location with the centroid weight as magnitude.
    """
    a = PointMass(HPoint.from_gauss(abs(f1.offset), 0.0 if f1.offset >= 0 else math.pi),
                  f1.magnitude)
    b = PointMass(HPoint.from_gauss(abs(f2.offset), 0.0 if f2.offset >= 0 else math.pi),
                  f2.magnitude)
    z = combine(a, b)
    return math.asinh(z.location.u), z.weight


def transversal_of_points(points: np.ndarray, weights: np.ndarray) -> List[PointMass]:
    """Point-masses from arrays of hyperboloid vectors and weights."""
    return [PointMass(HPoint.from_vector(p), float(w)) for p, w in zip(points, weights)]

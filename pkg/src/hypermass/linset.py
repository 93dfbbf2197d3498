"""Linear sets: mass distributed along part of a geodesic.

Positions on the carrier are signed arclengths measured from the carrier's
closest point to the hyperboloid origin, increasing along its orientation.
Reversing the carrier reverses every position and negates moments about
points; centroids and masses are unaffected.

:func:`archimedes_moment` computes the moment of a lamina about a line by
slicing it along a pencil of asymptotically parallel geodesics.  After an
isometry that sends the pencil's ideal point to infinity in the upper
half-plane, the slices are the vertical lines ``x = a`` and
``dA = dx dy / y^2``.  Along a vertical line ``ds = dy / y``, so the slice at
``a`` contributes the moment of a linear set with density ``lambda / y``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import brentq

from .errors import SliceExtractionFailed
from .hcore import DirectedLine, HPoint, mink
from .lamina.core import Estimate, Lamina
from .lamina.quadrature import gauss_legendre, pairwise_sum
from .lamina.regions import Disk, GeodesicPolygon, Region
from .pmass import PointMass

GL_NODES = 32
AGREEMENT_TOL = 1e-12
SLICE_BISECT_TOL = 1e-10

Density = Union[float, Callable[[np.ndarray], np.ndarray]]


@dataclass(frozen=True, eq=False)
class LinearSet:
    """Density ``density(s)`` on the union of arclength ``intervals`` of ``carrier``."""

    carrier: DirectedLine
    intervals: Tuple[Tuple[float, float], ...]
    density: Density = 1.0

    def __post_init__(self):
        iv = sorted((float(a), float(b)) for a, b in self.intervals)
        if not iv:
            raise ValueError("a linear set needs at least one interval")
        for a, b in iv:
            if not (math.isfinite(a) and math.isfinite(b) and b > a):
                raise ValueError(f"interval [{a}, {b}] must have positive finite length")
        for (_, b), (c, _) in zip(iv[:-1], iv[1:]):
            if c <= b:
                raise ValueError("intervals must be disjoint")
        object.__setattr__(self, "intervals", tuple(iv))
        if not callable(self.density) and not self.density > 0:
            raise ValueError("constant density must be positive")
        total = self.integrate(lambda s: np.ones_like(s))
        if not total > 0:
            raise ValueError("density integrates to zero")

    @classmethod
    def segment(cls, a: HPoint, b: HPoint, density: Density = 1.0) -> "LinearSet":
        """The geodesic segment from ``a`` to ``b``."""
        from .hcore import line_through
        m = line_through(a, b)
        sa, sb = (float(v) for v in m.arclength(np.array([a.vec, b.vec])))
        return cls(m, ((sa, sb),), density)

    def lam(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        if callable(self.density):
            return np.asarray(self.density(s), dtype=float) * np.ones_like(s)
        return np.full_like(s, float(self.density))

    def points(self, s) -> np.ndarray:
        return self.carrier.point_at(s)

    @property
    def hull(self) -> Tuple[float, float]:
        return self.intervals[0][0], self.intervals[-1][1]

    def integrate(self, f: Callable[[np.ndarray], np.ndarray], cuts: Sequence[float] = ()) -> float:
        """``sum over intervals of integral f(s) lambda(s) ds``, split at ``cuts``."""
        return self.integrate_with_error(f, cuts)[0]

    def integrate_with_error(self, f, cuts: Sequence[float] = ()) -> Tuple[float, float]:
        vals, errs = [], []
        for a, b in self.intervals:
            edges = [a] + sorted(c for c in cuts if a < c < b) + [b]
            for lo, hi in zip(edges[:-1], edges[1:]):
                v, e = _gl_checked(lambda s: f(s) * self.lam(s), lo, hi)
                vals.append(v)
                errs.append(e)
        return float(math.fsum(vals)), float(sum(errs))

    def restrict(self, lo: float, hi: float) -> "LinearSet":
        """The part of the set between positions ``lo`` and ``hi``."""
        iv = tuple((max(a, lo), min(b, hi)) for a, b in self.intervals if min(b, hi) > max(a, lo))
        return LinearSet(self.carrier, iv, self.density)


def _gl_checked(f, a: float, b: float) -> Tuple[float, float]:
    """32-node Gauss-Legendre on ``[a, b]``, checked against the two halves.

    If the two estimates disagree by more than 1e-12 (relative to the
    integral of ``|f|``) the halves are used; the disagreement is the error.
    """
    x, w = gauss_legendre(GL_NODES)
    h = b - a
    whole_f = f(a + h * x)
    whole = float(whole_f @ w) * h
    mid = a + h / 2
    half = float(f(a + h / 2 * x) @ w + f(mid + h / 2 * x) @ w) * h / 2
    err = abs(half - whole)
    if err <= AGREEMENT_TOL * max(float(np.abs(whole_f) @ w) * h, np.finfo(float).tiny):
        return whole, err
    return half, err


# ---------------------------------------------------------------------------
# moments, centroid, mass
# ---------------------------------------------------------------------------

def linset_moment_about_point(S: LinearSet, a: float) -> float:
    """``integral of sigma_A lambda sinh|s - a| ds``, positive ahead of ``a``."""
    return S.integrate(lambda s: np.sinh(s - a), cuts=(a,))


def _moment_scale(S: LinearSet) -> float:
    lo, hi = S.hull
    return S.integrate(lambda s: np.ones_like(s)) * math.sinh(hi - lo)


def linset_centroid(S: LinearSet) -> float:
    """Position ``C`` with zero moment about ``C``; the moment decreases in ``a``."""
    lo, hi = S.hull
    f = lambda a: linset_moment_about_point(S, a)
    flo, fhi = f(lo), f(hi)
    if flo <= 0.0:
        return lo
    if fhi >= 0.0:
        return hi
    return float(brentq(f, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200))


def linset_mass(S: LinearSet, centroid: Optional[float] = None) -> float:
    """``integral of lambda cosh(s - C) ds``."""
    c = linset_centroid(S) if centroid is None else centroid
    return S.integrate(lambda s: np.cosh(s - c), cuts=(c,))


def linset_point_mass(S: LinearSet) -> PointMass:
    c = linset_centroid(S)
    return PointMass(HPoint.from_vector(S.points(c)), linset_mass(S, c))


def linset_moment_about_line(S: LinearSet, m: DirectedLine) -> float:
    """``integral of sigma_m lambda sinh d(X(s), m) ds``."""
    n = m.normal
    return S.integrate(lambda s: mink(S.points(s), n))


def linset_transversal(S: LinearSet, n: int) -> list:
    """``n`` cells of equal length (per interval, proportional to length),
    each a point-mass at the cell midpoint weighted by density times length."""
    if n < 1:
        raise ValueError("cell count must be positive")
    total = sum(b - a for a, b in S.intervals)
    out = []
    for a, b in S.intervals:
        k = max(1, int(round(n * (b - a) / total)))
        h = (b - a) / k
        mids = a + h * (np.arange(k) + 0.5)
        lam = S.lam(mids)
        pts = S.points(mids)
        out.extend(PointMass(HPoint.from_vector(p), float(l * h)) for p, l in zip(pts, lam) if l > 0)
    return out


# ---------------------------------------------------------------------------
# pencil slicing
# ---------------------------------------------------------------------------

def _rotation(phi: float) -> np.ndarray:
    c, s = math.cos(phi), math.sin(phi)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


class _PencilChart:
    """Half-plane chart in which the pencil at disk boundary angle ``phi`` is vertical."""

    def __init__(self, phi: float):
        self.to_global = _rotation(phi)
        self.to_chart = _rotation(-phi)

    def half_plane(self, x) -> Tuple[np.ndarray, np.ndarray]:
        r = np.asarray(x, dtype=float).reshape(-1, 3) @ self.to_chart.T
        t, u, v = r[:, 0], r[:, 1], r[:, 2]
        # y = 1 / (t - u); t - u = (1 + v^2) / (t + u) is cancellation-free
        tm = (1.0 + v * v) / (t + u)
        return -v / tm, 1.0 / tm

    def hyperboloid(self, a, y) -> np.ndarray:
        a = np.asarray(a, dtype=float)
        y = np.asarray(y, dtype=float)
        r2 = a * a + y * y
        loc = np.stack([(1.0 + r2) / (2 * y), (r2 - 1.0) / (2 * y), -a / y], axis=-1)
        return loc @ self.to_global.T


def _polygon_slices(poly: GeodesicPolygon, chart: _PencilChart):
    """Exact slices: each side gives ``A y^2 + B <= 0`` on ``x = a``."""
    normals = poly.side_normals() @ chart.to_chart.T
    nt, nu, nv = normals[:, 0], normals[:, 1], normals[:, 2]
    coef_a = nu - nt
    vx, _ = chart.half_plane(np.array([p.vec for p in poly.vertices]))
    breaks = np.unique(vx)

    def slices(a: np.ndarray):
        a = np.asarray(a, dtype=float)
        coef_b = coef_a[None, :] * a[:, None] ** 2 - 2 * nv[None, :] * a[:, None] - (nt + nu)[None, :]
        lo = np.zeros(len(a))
        hi = np.full(len(a), np.inf)
        with np.errstate(divide="ignore", invalid="ignore"):
            bound = -coef_b / coef_a[None, :]
        for k in range(len(coef_a)):
            if coef_a[k] > 0:
                hi = np.minimum(hi, bound[:, k])
            elif coef_a[k] < 0:
                lo = np.maximum(lo, bound[:, k])
            else:
                hi = np.where(coef_b[:, k] > 0, -np.inf, hi)
        ok = hi > lo
        if np.any(ok & (~np.isfinite(hi) | (lo <= 0))):
            raise SliceExtractionFailed("slice reaches the ideal boundary")
        y1 = np.sqrt(np.where(ok, lo, 1.0))
        y2 = np.sqrt(np.where(ok, hi, 1.0))
        return [[(float(p), float(q))] if o else [] for p, q, o in zip(y1, y2, ok)]

    return breaks, slices, False


def _disk_slices(disk: Disk, chart: _PencilChart):
    """Exact slices of the Euclidean circle with centre ``(xc, yc cosh r)``, radius ``yc sinh r``."""
    xc, yc = (float(v[0]) for v in chart.half_plane(disk.center.vec))
    ye = yc * math.cosh(disk.radius)
    rad = yc * math.sinh(disk.radius)

    def slices(a: np.ndarray):
        h = np.sqrt(np.clip(rad * rad - (np.asarray(a) - xc) ** 2, 0.0, None))
        return [[(ye - q, ye + q)] if q > 0 else [] for q in h]

    return np.array([xc - rad, xc + rad]), slices, True


def _generic_slices(region: Region, chart: _PencilChart, samples: int = 400):
    """Slices found by sampling the depth along ``ln y`` and bisecting sign changes."""
    bx, by = chart.half_plane(region.boundary_points(1440))
    ly_lo = math.log(float(np.min(by))) - 0.5
    ly_hi = math.log(float(np.max(by))) + 0.5
    grid = np.linspace(ly_lo, ly_hi, samples)

    def inside(a, ly):
        return region.depth(chart.hyperboloid(a, np.exp(ly)))

    def slices(a: np.ndarray):
        out = []
        for ai in np.asarray(a, dtype=float):
            d = inside(np.full_like(grid, ai), grid)
            if d[0] >= 0 or d[-1] >= 0:
                raise SliceExtractionFailed("slice sampling window does not enclose the region")
            sgn = d >= 0
            flips = np.nonzero(sgn[1:] != sgn[:-1])[0]
            if len(flips) % 2:
                raise SliceExtractionFailed(f"unbalanced boundary crossings at x = {ai!r}")
            ends = []
            for k in flips:
                g = lambda t: float(inside(np.array([ai]), np.array([t]))[0])
                ends.append(brentq(g, grid[k], grid[k + 1], xtol=SLICE_BISECT_TOL))
            out.append([(math.exp(p), math.exp(q)) for p, q in zip(ends[::2], ends[1::2])])
        return out

    return np.array([float(np.min(bx)), float(np.max(bx))]), slices, True


def _slicer(region: Region, chart: _PencilChart):
    if isinstance(region, GeodesicPolygon):
        return _polygon_slices(region, chart)
    if isinstance(region, Disk):
        return _disk_slices(region, chart)
    return _generic_slices(region, chart)


def _slice_integrals(L: Lamina, chart: _PencilChart, n: np.ndarray, a: np.ndarray, spans):
    """``integral over the slice of lambda <X, n> dy / y^2`` for each abscissa."""
    x, w = gauss_legendre(GL_NODES)
    out = np.zeros(len(a))
    err = 0.0
    for i, (ai, iv) in enumerate(zip(a, spans)):
        for y1, y2 in iv:
            t1, t2 = math.log(y1), math.log(y2)

            def f(t, ai=ai):
                pts = chart.hyperboloid(np.full_like(t, ai), np.exp(t))
                return L.density(pts) * mink(pts, n) * np.exp(-t)

            v, e = _gl_checked(f, t1, t2)
            out[i] += v
            err += e
    return out, err


def archimedes_moment(L: Lamina, pencil: float, m: DirectedLine, slices: int = 48) -> Estimate:
    """Moment of ``L`` about ``m`` as an integral of pencil-slice moments.

    ``pencil`` is the disk-model boundary angle of the pencil's ideal point.
    The outer integral over slice abscissae uses ``slices`` Gauss-Legendre
    nodes per panel between consecutive vertex abscissae (a sine
    substitution is used for curved outlines); the reported error is the
    difference from a run with every panel halved.
    """
    if slices < 2:
        raise ValueError("need at least two slices per panel")
    chart = _PencilChart(pencil)
    breaks, get, smooth_ends = _slicer(L.region, chart)
    n = m.normal
    lo_x, hi_x = float(breaks[0]), float(breaks[-1])

    def panel(lo, hi, k):
        x, w = gauss_legendre(k)
        if smooth_ends:
            # a = centre + half sin(phi) removes the square-root end behaviour
            c, r = (lo_x + hi_x) / 2, (hi_x - lo_x) / 2
            p1, p2 = math.asin(max(-1.0, (lo - c) / r)), math.asin(min(1.0, (hi - c) / r))
            phi = p1 + (p2 - p1) * x
            a = c + r * np.sin(phi)
            jac = (p2 - p1) * r * np.cos(phi)
        else:
            a = lo + (hi - lo) * x
            jac = np.full_like(x, hi - lo)
        vals, e = _slice_integrals(L, chart, n, a, get(a))
        return float(np.sum(w * jac * vals)), e

    coarse, fine, inner = [], [], 0.0
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        if hi - lo <= 0:
            continue
        v, e = panel(lo, hi, slices)
        coarse.append(v)
        mid = (lo + hi) / 2
        v1, e1 = panel(lo, mid, slices)
        v2, e2 = panel(mid, hi, slices)
        fine.append(v1 + v2)
        inner += e1 + e2
    total = float(pairwise_sum(fine)) if fine else 0.0
    err = abs(total - float(pairwise_sum(coarse))) + inner if fine else 0.0
    return Estimate(total, err, 2 * len(fine))


def pencil_slice(L: Lamina, pencil: float, a: float, weighted: bool = True) -> Optional[LinearSet]:
    """The slice ``x = a`` of ``L`` as a linear set carried by the pencil line,
    directed towards the ideal point.

    With ``weighted`` the density is ``lambda / y``, so that integrating the
    slice moments over ``a`` gives the lamina moment; otherwise it is the
    plain lamina density.  Returns None for an empty slice.
    """
    chart = _PencilChart(pencil)
    _, get, _ = _slicer(L.region, chart)
    spans = get(np.array([float(a)]))[0]
    if not spans:
        return None
    p, q = (HPoint.from_vector(v) for v in chart.hyperboloid(np.array([a, a]), np.array([1.0, 2.0])))
    from .hcore import line_through
    carrier = line_through(p, q)
    ends = np.array([[y1, y2] for y1, y2 in spans])
    s = carrier.arclength(chart.hyperboloid(np.full(ends.shape, float(a)), ends))

    def density(t):
        pts = carrier.point_at(t)
        lam = L.density(pts.reshape(-1, 3)).reshape(np.shape(t))
        if not weighted:
            return lam
        _, y = chart.half_plane(pts.reshape(-1, 3))
        return lam / y.reshape(np.shape(t))

    return LinearSet(carrier, tuple((float(u), float(v)) for u, v in s), density)

"""Laminae: moments, centroids, masses and delta-transversals.

The centroid of a lamina is found from the Minkowski first moment
``S = integral of lambda(X) X dA``: since ``<S, n> = M_m(L)`` for every line
with unit normal ``n``, the lines with zero moment are exactly those whose
plane contains ``S``, they all pass through ``S / |S|``, and the mass
``integral of lambda cosh d(X, C) dA`` equals ``|S|``.  Each computed centroid
is re-checked by integrating the moments about eight lines through it on an
independent (higher-order) grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import reduce
from typing import Callable as _Fn, Optional, Sequence, Tuple

import numpy as np

from ..errors import BadDecomposition, BalanceCheckFailed, InvalidDensity, MeshTooFine
from ..hcore import (
    DirectedLine,
    HPoint,
    dist_array,
    gauss_array,
    line_through_point,
    mink,
)
from ..pmass import PointMass, PointMassSystem, combine
from .quadrature import QuadratureConfig, QuadResult, fixed_grid, gauss_legendre, integrate
from .regions import Region

DEFAULT_CONFIG = QuadratureConfig()
BALANCE_DIRECTIONS = 8
DEFAULT_CELL_CAP = 10 ** 7


# ---------------------------------------------------------------------------
# densities
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Constant:
    value: float = 1.0

    def __post_init__(self):
        if not self.value > 0:
            raise InvalidDensity("constant density must be positive")

    def __call__(self, x) -> np.ndarray:
        return np.full(np.asarray(x).shape[:-1], float(self.value))

    def scaled(self, k: float) -> "Constant":
        return Constant(self.value * k)


@dataclass(frozen=True)
class RadialAffine:
    """``a + b cosh d(X, center)``."""

    a: float
    b: float
    center: HPoint

    def __call__(self, x) -> np.ndarray:
        return self.a - self.b * mink(np.asarray(x, dtype=float), self.center.vec)

    def scaled(self, k: float) -> "RadialAffine":
        return RadialAffine(self.a * k, self.b * k, self.center)


@dataclass(frozen=True)
class FunctionDensity:
    """Any continuous non-negative function of hyperboloid vectors ``(N, 3) -> (N,)``."""

    fn: _Fn[[np.ndarray], np.ndarray]
    factor: float = 1.0

    def __call__(self, x) -> np.ndarray:
        return self.factor * np.asarray(self.fn(np.asarray(x, dtype=float)), dtype=float)

    def scaled(self, k: float) -> "FunctionDensity":
        return FunctionDensity(self.fn, self.factor * k)


@dataclass(frozen=True)
class Estimate:
    """A quadrature value with its estimated absolute error."""

    value: float
    error: float
    panels: int = 0

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True, eq=False)
class Lamina:
    region: Region
    density: object = field(default_factory=Constant)
    quad: QuadratureConfig = DEFAULT_CONFIG

    def __post_init__(self):
        pts, _ = fixed_grid(self.region, QuadratureConfig(6, 6))
        vals = self.density(np.vstack([pts, self.region.boundary_points(64)]))
        if np.any(~np.isfinite(vals)) or np.any(vals < 0):
            raise InvalidDensity("density is negative or non-finite on the region")
        total = integrate(self.region, lambda x: self.density(x), self.quad)
        if not float(total.value[0]) > 1e-12:
            raise InvalidDensity("density integrates to zero over the region")

    def with_density(self, density) -> "Lamina":
        return Lamina(self.region, density, self.quad)


@dataclass(frozen=True)
class LaminaCentroid:
    location: HPoint
    mass: float
    error: float
    balance_residuals: Tuple[float, ...]
    balance_scale: float

    @property
    def point_mass(self) -> PointMass:
        return PointMass(self.location, self.mass)


def _cfg(L: Lamina, q: Optional[QuadratureConfig]) -> QuadratureConfig:
    return L.quad if q is None else q


def _as_lamina(x) -> Lamina:
    return x if isinstance(x, Lamina) else Lamina(x)


# ---------------------------------------------------------------------------
# integrals
# ---------------------------------------------------------------------------

def area(region, q: QuadratureConfig = DEFAULT_CONFIG) -> Estimate:
    """Hyperbolic area ``integral of sinh(rho) drho dtheta``."""
    if isinstance(region, Lamina):
        region = region.region
    r = integrate(region, lambda x: np.ones(len(x)), q)
    return Estimate(float(r.value[0]), r.error, r.panels)


def density_integral(L: Lamina, q: Optional[QuadratureConfig] = None) -> Estimate:
    r = integrate(L.region, L.density, _cfg(L, q))
    return Estimate(float(r.value[0]), r.error, r.panels)


def lamina_moment(L: Lamina, m: DirectedLine, q: Optional[QuadratureConfig] = None) -> Estimate:
    """Signed moment ``integral of sigma_m lambda sinh d(X, m) dA``."""
    L = _as_lamina(L)
    n = m.normal
    r = integrate(L.region, lambda x: L.density(x) * mink(x, n), _cfg(L, q))
    return Estimate(float(r.value[0]), r.error, r.panels)


def first_moment(L: Lamina, q: Optional[QuadratureConfig] = None) -> QuadResult:
    """Minkowski first moment ``S`` (a timelike vector) with diagnostics."""
    L = _as_lamina(L)
    return integrate(L.region, lambda x: L.density(x)[:, None] * x, _cfg(L, q))


def balance_residuals(L: Lamina, c: HPoint, q: Optional[QuadratureConfig] = None,
                      directions: int = BALANCE_DIRECTIONS) -> Tuple[np.ndarray, float]:
    """Moments about ``directions`` lines through ``c`` and the scale
    ``integral of lambda sinh d(X, c) dA`` that bounds them."""
    L = _as_lamina(L)
    cfg = _cfg(L, q).refined()
    normals = np.array([line_through_point(c, k * math.pi / directions).normal
                        for k in range(directions)])
    moments = integrate(L.region, lambda x: L.density(x)[:, None] * mink(x[:, None, :], normals[None]),
                        cfg)
    loose = QuadratureConfig(cfg.radial_order, cfg.angular_order, cfg.max_depth, 1e-4)
    scale = integrate(L.region,
                      lambda x: L.density(x) * np.sinh(dist_array(x, c.vec[None, :])), loose)
    return moments.value, float(scale.value[0])


def lamina_centroid(L: Lamina, q: Optional[QuadratureConfig] = None) -> LaminaCentroid:
    """Location of the center of mass, with the mass ``|S|``.

    Raises :class:`BalanceCheckFailed` if any of the eight verification
    moments exceeds ``10 * tol`` times the moment scale.
    """
    L = _as_lamina(L)
    cfg = _cfg(L, q)
    r = first_moment(L, cfg)
    s = r.value
    mass = math.sqrt(-float(mink(s, s)))
    c = HPoint.from_vector(s)
    res, scale = balance_residuals(L, c, cfg)
    if np.max(np.abs(res)) > 10.0 * cfg.tol * scale:
        raise BalanceCheckFailed(
            f"centroid balance residual {np.max(np.abs(res)):.3e} exceeds {10 * cfg.tol * scale:.3e}")
    return LaminaCentroid(c, mass, r.error, tuple(float(v) for v in res), scale)


def lamina_mass(L: Lamina, q: Optional[QuadratureConfig] = None,
                centroid: Optional[HPoint] = None) -> Estimate:
    """``integral of lambda cosh d(X, C) dA`` with ``C`` the centroid location."""
    L = _as_lamina(L)
    cfg = _cfg(L, q)
    c = lamina_centroid(L, cfg).location if centroid is None else centroid
    r = integrate(L.region, lambda x: L.density(x) * np.cosh(dist_array(x, c.vec[None, :])), cfg)
    return Estimate(float(r.value[0]), r.error, r.panels)


# ---------------------------------------------------------------------------
# diagnostics
# ---------------------------------------------------------------------------

def _sample(L: Lamina) -> np.ndarray:
    pts, _ = fixed_grid(L.region, QuadratureConfig(8, 8))
    return np.vstack([pts, L.region.boundary_points(256)])


def density_max(L: Lamina) -> float:
    """Largest density over quadrature nodes and boundary samples."""
    return float(np.max(L.density(_sample(L))))


def cosh_bound_point(L: Lamina, p: HPoint) -> float:
    """``max cosh d(X, p)`` over the region (sampled)."""
    return float(np.max(np.cosh(dist_array(_sample(L), p.vec[None, :]))))


def cosh_bound_line(L: Lamina, m: DirectedLine) -> float:
    """``max cosh d(X, m)`` over the region (sampled)."""
    s = mink(_sample(L), m.normal)
    return float(np.max(np.sqrt(1.0 + s * s)))


# ---------------------------------------------------------------------------
# delta-transversals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Transversal:
    system: PointMassSystem
    delta: float
    areas: np.ndarray
    seed: int

    @property
    def total_area(self) -> float:
        return float(np.sum(self.areas))

    def centroid(self) -> PointMass:
        # the fold of * equals the normalised weighted vector sum
        return PointMass.from_vector(np.sum(self.system.locations * self.system.weights[:, None], axis=0))


def delta_transversal(L: Lamina, delta: float, seed: int = 0,
                      cap: int = DEFAULT_CELL_CAP, column_order: int = 6) -> Transversal:
    """Point-mass discretisation over polar cells of diameter < ``delta``.

    Cells are annular sectors of the anchor chart (radial step and arc length
    both below ``0.49 delta``) clipped to the region; column boundaries include
    every angular breakpoint of the region.  Every cell takes its sample
    point at the same relative offset ``(a, b)`` within its angular and
    (clipped) radial span.  Seed 0 uses the cell midpoints ``(1/2, 1/2)``,
    which converges at second order in ``delta``; any other seed draws the
    offset uniformly from ``[0, 1)^2``.  Cells with clipped area below 1e-12
    are merged into the cell radially inside them.
    """
    L = _as_lamina(L)
    if not delta > 0:
        raise ValueError("delta must be positive")
    region = L.region
    if seed == 0:
        a_off = b_off = 0.5
    else:
        a_off, b_off = np.random.default_rng(seed).uniform(0.0, 1.0, size=2)
    bp = np.asarray(region.breakpoints(), dtype=float)
    lo, hi = float(bp[0]), float(bp[-1])

    if delta >= region.diameter():
        theta = lo + a_off * (hi - lo)
        rho = b_off * float(region.rho_max(np.array([theta]))[0])
        x = gauss_array(theta, rho) @ region.frame.T
        a = area(region, L.quad).value
        pm = PointMass(HPoint.from_vector(x), float(L.density(x[None, :])[0]) * a)
        return Transversal(PointMassSystem([pm]), delta, np.array([a]), seed)

    dense = np.concatenate([np.linspace(p, q, 64) for p, q in zip(bp[:-1], bp[1:])])
    rho_top = float(np.max(region.rho_max(dense)))
    rings = int(math.ceil(rho_top / (0.49 * delta)))
    d_rho = rho_top / rings
    d_theta = 0.49 * delta / math.sinh(rho_top)
    counts = [max(1, int(math.ceil((q - p) / d_theta))) for p, q in zip(bp[:-1], bp[1:])]
    if sum(counts) * rings > cap:
        raise MeshTooFine(f"{sum(counts) * rings} cells exceed the cap of {cap}")
    edges = np.concatenate([np.linspace(p, q, c + 1)[:-1] for p, q, c in zip(bp[:-1], bp[1:], counts)]
                           + [np.array([hi])])
    starts, widths = edges[:-1], np.diff(edges)

    xg, wg = gauss_legendre(column_order)
    theta_n = starts[:, None] + widths[:, None] * xg[None, :]
    rmax_n = region.rho_max(theta_n)
    r_edges = d_rho * np.arange(rings + 1)
    clipped = np.clip(rmax_n[:, :, None], r_edges[None, None, :-1], r_edges[None, None, 1:])
    cell_area = np.einsum("cgk,g,c->ck", np.cosh(clipped) - np.cosh(r_edges[None, None, :-1]),
                          wg, widths)
    cell_area = np.maximum(cell_area, 0.0)

    sliver = (cell_area > 0) & (cell_area < 1e-12)
    for c, k in zip(*np.nonzero(sliver)):
        if k > 0:
            cell_area[c, k - 1] += cell_area[c, k]
            cell_area[c, k] = 0.0
    cols, ks = np.nonzero(cell_area > 0)

    theta_s = starts[cols] + a_off * widths[cols]
    rmax_s = region.rho_max(theta_s)
    short = rmax_s <= r_edges[ks]
    if np.any(short):
        best = np.argmax(rmax_n[cols[short]], axis=1)
        theta_s[short] = theta_n[cols[short], best]
        rmax_s[short] = rmax_n[cols[short], best]
    rho_s = r_edges[ks] + b_off * (np.minimum(r_edges[ks + 1], rmax_s) - r_edges[ks])
    pts = gauss_array(theta_s, rho_s) @ region.frame.T
    areas = cell_area[cols, ks]
    weights = L.density(pts) * areas
    keep = weights > 0
    system = PointMassSystem(PointMass(HPoint.from_vector(p), float(w))
                             for p, w in zip(pts[keep], weights[keep]))
    return Transversal(system, float(delta), areas, int(seed))


# ---------------------------------------------------------------------------
# decompositions
# ---------------------------------------------------------------------------

def decompose_and_combine(L: Lamina, parts: Sequence[Region],
                          q: Optional[QuadratureConfig] = None) -> PointMass:
    """Fold of the part centroids with ``*``.

    The parts must tile ``L.region``: each part lies inside the region,
    part areas sum to the region area within 1e-8, and no part has more than
    1e-9 of its area strictly inside another.
    """
    L = _as_lamina(L)
    cfg = _cfg(L, q)
    parts = list(parts)
    if not parts:
        raise BadDecomposition("empty decomposition")
    grids = [fixed_grid(p, QuadratureConfig(8, 8), splits=4) for p in parts]
    for pts, _ in grids:
        if not np.all(L.region.contains(pts, tol=1e-9)):
            raise BadDecomposition("a part extends outside the region")
    whole = area(L.region, cfg).value
    total = sum(area(p, cfg).value for p in parts)
    if abs(total - whole) > 1e-8 * max(1.0, whole):
        raise BadDecomposition(f"part areas sum to {total!r}, region area is {whole!r}")
    for i, (pts, w) in enumerate(grids):
        for j, other in enumerate(parts):
            if i != j:
                overlap = float(np.sum(w[other.depth(pts) > 1e-9]))
                if overlap > 1e-9:
                    raise BadDecomposition(f"parts {i} and {j} overlap (area ~ {overlap:.3e})")
    centroids = [lamina_centroid(Lamina(p, L.density, cfg), cfg).point_mass for p in parts]
    return reduce(combine, centroids)

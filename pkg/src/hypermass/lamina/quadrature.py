"""Adaptive tensor Gauss-Legendre quadrature in a geodesic polar chart.

A region is described in the Gauss chart of an interior anchor point as
``0 <= rho <= rho_max(theta)`` for ``theta`` in an angular window, so that
``dA = sinh(rho) drho dtheta``.  Each angular panel is integrated with a
tensor rule (Gauss-Legendre in theta, composite Gauss-Legendre in rho) and
bisected until the panel and its two halves agree to the panel's share of
the error budget.

Panel results are reduced with pairwise summation in panel order, so a run
that evaluates top-level panels on worker threads returns bit-for-bit the
same numbers as a sequential one.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, List, Tuple

import numpy as np

from ..errors import QuadratureNotConverged
from ..hcore import gauss_array


@dataclass(frozen=True)
class QuadratureConfig:
    radial_order: int = 12
    angular_order: int = 12
    max_depth: int = 18
    tol: float = 1e-8
    workers: int = 1
    radial_piece: float = 0.5

    def __post_init__(self):
        if self.radial_order < 2 or self.angular_order < 2:
            raise ValueError("quadrature orders must be >= 2")
        if not 1e-14 < self.tol < 1e-2:
            raise ValueError("quadrature tolerance must lie in (1e-14, 1e-2)")
        if self.max_depth < 1 or self.workers < 1 or not self.radial_piece > 0:
            raise ValueError("invalid quadrature configuration")

    def refined(self, extra: int = 4) -> "QuadratureConfig":
        """A configuration with higher orders, used for independent re-checks."""
        return QuadratureConfig(self.radial_order + extra, self.angular_order + extra,
                                self.max_depth, self.tol, self.workers, self.radial_piece)


@dataclass(frozen=True)
class QuadResult:
    value: np.ndarray
    error: float
    panels: int
    scale: float


@lru_cache(maxsize=64)
def gauss_legendre(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    return (x + 1.0) / 2.0, w / 2.0


def pairwise_sum(values: List[np.ndarray]) -> np.ndarray:
    if len(values) == 1:
        return values[0]
    mid = len(values) // 2
    return pairwise_sum(values[:mid]) + pairwise_sum(values[mid:])


def panel_nodes(region, a: float, b: float, cfg: QuadratureConfig):
    """Global points and area weights of the tensor rule on ``[a, b]``."""
    xt, wt = gauss_legendre(cfg.angular_order)
    theta = a + (b - a) * xt
    rmax = np.asarray(region.rho_max(theta), dtype=float)
    pieces = max(1, int(math.ceil(float(np.max(rmax)) / cfg.radial_piece)))
    xs, ws = gauss_legendre(cfg.radial_order)
    s = ((np.arange(pieces)[:, None] + xs[None, :]) / pieces).ravel()
    w_s = np.tile(ws / pieces, pieces)
    rho = s[None, :] * rmax[:, None]
    weights = ((b - a) * wt)[:, None] * w_s[None, :] * rmax[:, None] * np.sinh(rho)
    local = gauss_array(theta[:, None], rho)
    pts = local.reshape(-1, 3) @ region.frame.T
    return pts, weights.ravel()


def _evaluate(region, integrand, a, b, cfg):
    pts, w = panel_nodes(region, a, b, cfg)
    f = np.asarray(integrand(pts), dtype=float).reshape(len(pts), -1)
    return f.T @ w, float(np.abs(f).max(axis=1) @ w)


def initial_panels(region, max_width: float = math.pi / 4) -> List[Tuple[float, float]]:
    bp = np.asarray(region.breakpoints(), dtype=float)
    out = []
    for a, b in zip(bp[:-1], bp[1:]):
        k = max(1, int(math.ceil((b - a) / max_width)))
        edges = np.linspace(a, b, k + 1)
        out.extend(zip(edges[:-1], edges[1:]))
    return out


def integrate(region, integrand: Callable[[np.ndarray], np.ndarray],
              cfg: QuadratureConfig = QuadratureConfig()) -> QuadResult:
    """Integrate ``integrand`` (points ``(N, 3)`` -> values ``(N, k)``) over ``region``.

    The tolerance is relative to the integral of ``max_k |f_k|`` over the
    region and is distributed over panels in proportion to their width.
    """
    panels = initial_panels(region)
    first = [_evaluate(region, integrand, a, b, cfg) for a, b in panels]
    scale = sum(s for _, s in first)
    width = panels[-1][1] - panels[0][0]
    floor = np.finfo(float).tiny

    def refine(a, b, coarse, depth, acc, errs):
        mid = 0.5 * (a + b)
        left = _evaluate(region, integrand, a, mid, cfg)
        right = _evaluate(region, integrand, mid, b, cfg)
        fine = left[0] + right[0]
        err = float(np.max(np.abs(fine - coarse)))
        if err <= cfg.tol * max(scale, floor) * (b - a) / width:
            acc.append(fine)
            errs.append(err)
            return
        if depth >= cfg.max_depth:
            raise QuadratureNotConverged(
                f"panel [{a:.6g}, {b:.6g}] not converged after {depth} bisections")
        refine(a, mid, left[0], depth + 1, acc, errs)
        refine(mid, b, right[0], depth + 1, acc, errs)

    def run(i):
        acc, errs = [], []
        refine(panels[i][0], panels[i][1], first[i][0], 1, acc, errs)
        return acc, errs

    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(run, range(len(panels))))
    else:
        results = [run(i) for i in range(len(panels))]
    values = [v for acc, _ in results for v in acc]
    errors = [e for _, errs in results for e in errs]
    return QuadResult(pairwise_sum(values), float(sum(errors)), len(values), scale)


def fixed_grid(region, cfg: QuadratureConfig = QuadratureConfig(), splits: int = 2):
    """Non-adaptive nodes/weights, for sampling and diagnostics."""
    pts, ws = [], []
    for a, b in initial_panels(region):
        edges = np.linspace(a, b, splits + 1)
        for lo, hi in zip(edges[:-1], edges[1:]):
            p, w = panel_nodes(region, lo, hi, cfg)
            pts.append(p)
            ws.append(w)
    return np.concatenate(pts), np.concatenate(ws)

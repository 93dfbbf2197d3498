"""Independent reference integrators used by the test-suite.

These deliberately avoid the library's polar-chart quadrature: geodesic
triangles are integrated with ``scipy.integrate.dblquad`` in the Klein
model, where geodesics are straight and ``dA = dx dy / (1 - x^2 - y^2)^(3/2)``.
"""

import math

import numpy as np
from scipy import integrate

from hypermass.hcore import HPoint


def klein(p: HPoint):
    return p.u / p.t, p.v / p.t


def _hyperboloid(x, y):
    t = 1.0 / math.sqrt(1.0 - x * x - y * y)
    return np.array([t, x * t, y * t])


def triangle_integral(a: HPoint, b: HPoint, c: HPoint, f, tol=1e-12):
    """Integral of ``f(X)`` (hyperboloid vector -> float) over the geodesic triangle."""
    (ax, ay), (bx, by), (cx, cy) = klein(a), klein(b), klein(c)
    jac = abs((bx - ax) * (cy - ay) - (cx - ax) * (by - ay))

    def g(t, s):
        x = ax + s * (bx - ax) + t * (cx - ax)
        y = ay + s * (by - ay) + t * (cy - ay)
        return f(_hyperboloid(x, y)) * (1.0 - x * x - y * y) ** -1.5

    val, _ = integrate.dblquad(g, 0.0, 1.0, 0.0, lambda s: 1.0 - s, epsabs=tol, epsrel=tol)
    return val * jac


def triangle_first_moment(a, b, c):
    return np.array([triangle_integral(a, b, c, lambda x, k=k: x[k]) for k in range(3)])


def polar_integral(center_frame, rho_max, f, tol=1e-12):
    """Integral over ``rho <= rho_max(theta)`` in the chart given by a boost matrix."""

    def g(rho, theta):
        local = np.array([math.cosh(rho), math.sinh(rho) * math.cos(theta), math.sinh(rho) * math.sin(theta)])
        return f(center_frame @ local) * math.sinh(rho)

    val, _ = integrate.dblquad(g, 0.0, 2 * math.pi, 0.0, rho_max, epsabs=tol, epsrel=tol)
    return val

"""Limit objects for supercritical percolation on single-edge scale-free
rank-1 graphs: the critical window constant, the hub limit graph, and the
survival fixed point giving the sqrt(n)-scale giant."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .graphs import MultiGraph


def mean_weight(tau: float, cf: float) -> float:
    """Limiting average weight of the quantile construction: cf (tau-1)/(tau-2)."""
    if not tau > 2:
        raise ValueError("tau must exceed 2")
    return cf * (tau - 1.0) / (tau - 2.0)


def a_alpha(tau: float) -> float:
    """Window integral: int_0^inf (1 - e^-z) z^(1-tau) dz for tau in (2, 3).

    Evaluated by adaptive quadrature split at z = 1; the integrand has an
    integrable z^(2-tau) singularity at 0 and a z^(1-tau) tail.
    """
    if not 2.0 < tau < 3.0:
        raise ValueError("tau must lie in (2, 3)")

    def f(z):
        return -math.expm1(-z) * z ** (1.0 - tau)

    head, err1 = quad(f, 0.0, 1.0, epsabs=1e-13, epsrel=1e-13, limit=200)
    tail, err2 = quad(f, 1.0, np.inf, epsabs=1e-13, epsrel=1e-13, limit=200)
    if err1 + err2 > 1e-10:
        raise RuntimeError("window integral quadrature did not reach tolerance")
    return head + tail


def lambda_c(tau: float, cf: float, mu: float) -> float:
    """Critical window constant (cf^(1-tau)/2) sqrt((3-tau) mu^(tau-1) / A)."""
    if mu <= 0 or cf <= 0:
        raise ValueError("cf and mu must be positive")
    a = a_alpha(tau)
    return (cf ** (-(tau - 1.0)) / 2.0) * math.sqrt((3.0 - tau) * mu ** (tau - 1.0) / a)


def pair_intensity(u: int, v: int, lam: float, tau: float, cf: float, mu: float) -> float:
    """Poisson edge intensity between hubs u and v of the limit graph.

    lambda^2 * int_0^inf Theta_u(x) Theta_v(x) dx with
    Theta_w(x) = 1 - exp(-cf * theta_w * x^-alpha), theta_w = cf w^-alpha / mu.
    Symmetric and decreasing in each argument.
    """
    alpha = 1.0 / (tau - 1.0)
    cu = cf * cf * u ** (-alpha) / mu
    cv = cf * cf * v ** (-alpha) / mu

    def f(x):
        xa = x ** (-alpha)
        return math.expm1(-cu * xa) * math.expm1(-cv * xa)

    head, _ = quad(f, 0.0, 1.0, epsabs=1e-12, epsrel=1e-12, limit=200)
    tail, _ = quad(f, 1.0, np.inf, epsabs=1e-12, epsrel=1e-12, limit=200)
    return lam * lam * (head + tail)


def tiny_giant_graph(lam: float, tau: float, cf: float, mu: float, V: int, rng) -> MultiGraph:
    """Truncation to V hubs of the limiting two-step-connection multigraph.

    Hubs u < v receive Poisson(pair_intensity) parallel edges,
    independently. How large V must be for a target accuracy is not known
    a priori; callers should check sensitivity in V.
    """
    if V < 1:
        raise ValueError("V must be >= 1")
    if lam < 0:
        raise ValueError("lam must be nonnegative")
    us, vs = [], []
    if lam > 0:
        cache = {}
        for u in range(1, V + 1):
            for v in range(u + 1, V + 1):
                rate = cache.get((u, v))
                if rate is None:
                    rate = pair_intensity(u, v, lam, tau, cf, mu)
                    cache[(u, v)] = rate
                k = rng.poisson(rate)
                if k:
                    us.extend([u] * k)
                    vs.extend([v] * k)
    return MultiGraph(V, np.array(us, dtype=np.int64), np.array(vs, dtype=np.int64))


# ---------------------------------------------------------------------------
# Giant-size fixed point.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RhoSolution:
    """Maximal solution of rho(u) = 1 - exp(-lam int_0^a kappa(u,v) rho(v) dv)
    on a log-spaced grid over (0, a]."""

    u: np.ndarray
    rho: np.ndarray
    a: float
    iterations: int


def rho_fixed_point(a: float, lam: float, tau: float, cf: float, mu: float,
                    grid_size: int = 512, tol: float = 1e-10,
                    max_iter: int = 5000) -> RhoSolution:
    """Iterate the survival operator downward from rho = 1.

    The operator is monotone and maps [0,1]-valued functions to
    themselves, so the iterates decrease pointwise and converge to the
    maximal fixed point. kappa(u,v) = 1 - exp(-cf^2 (uv)^-alpha / mu).
    """
    if a <= 0:
        raise ValueError("a must be positive")
    if grid_size < 2:
        raise ValueError("grid_size must be >= 2")
    if lam < 0:
        raise ValueError("lam must be nonnegative")
    alpha = 1.0 / (tau - 1.0)
    # anchor the grid floor absolutely: a floor proportional to a starves
    # the small-u decades of resolution as a grows and breaks the
    # monotonicity of zeta in a
    floor = min(a, 1.0) * 1e-6
    decades = math.log10(a / floor)
    grid_size = max(grid_size, int(56 * decades))
    u = np.geomspace(floor, a, grid_size)
    if lam == 0:
        return RhoSolution(u=u, rho=np.zeros(grid_size), a=a, iterations=0)
    # trapezoid weights on the nonuniform grid
    w = np.zeros(grid_size)
    du = np.diff(u)
    w[:-1] += du / 2.0
    w[1:] += du / 2.0
    ua = u ** (-alpha)
    kern = -np.expm1(-(cf * cf / mu) * np.outer(ua, ua))
    rho = np.ones(grid_size)
    for it in range(1, max_iter + 1):
        nxt = -np.expm1(-lam * (kern @ (w * rho)))
        change = float(np.max(np.abs(nxt - rho)))
        rho = nxt
        if change < tol:
            return RhoSolution(u=u, rho=rho, a=a, iterations=it)
    raise RuntimeError("survival fixed point did not converge")


def zeta(a: float, lam: float, tau: float, cf: float, mu: float,
         grid_size: int = 512, tol: float = 1e-10) -> float:
    """Rescaled giant size at truncation a: lam int_0^a cf u^-alpha rho(u) du.

    The weight u^-alpha is integrable at 0; the piece below the grid floor
    is added analytically with rho frozen at its smallest-u value.
    """
    sol = rho_fixed_point(a, lam, tau, cf, mu, grid_size=grid_size, tol=tol)
    alpha = 1.0 / (tau - 1.0)
    integrand = cf * sol.u ** (-alpha) * sol.rho
    head = cf * sol.u[0] ** (1.0 - alpha) / (1.0 - alpha) * sol.rho[0]
    return lam * (float(np.trapezoid(integrand, sol.u)) + head)


def zeta_limit(lam: float, tau: float, cf: float, mu: float,
               a0: float = 2.0, rel_tol: float = 0.01, max_doublings: int = 12,
               grid_size: int = 512) -> tuple[float, float]:
    """Limit of zeta over increasing truncations a. Returns (zeta, final a).

    Doubling a shrinks the missing tail geometrically with ratio
    2^(1-2 alpha), so the limit is Richardson-extrapolated from the
    increments; iteration stops once successive extrapolants agree to
    rel_tol. Below the critical window constant the fixed point collapses
    to zero for every a, and zero is returned rather than raised.
    """
    if lam <= 0:
        raise ValueError("lam must be positive")
    a = a0
    values = [zeta(a, lam, tau, cf, mu, grid_size=grid_size)]
    extrap_prev = values[-1]
    for k in range(1, max_doublings + 1):
        a *= 2.0
        values.append(zeta(a, lam, tau, cf, mu, grid_size=grid_size))
        if len(values) >= 3:
            inc_prev = values[-2] - values[-3]
            inc = values[-1] - values[-2]
            if inc <= 1e-12 or inc_prev - inc <= 1e-12:
                extrap = values[-1]  # increments exhausted (or zero phase)
            else:
                extrap = values[-1] + inc * inc / (inc_prev - inc)
            if k >= 4 and abs(extrap - extrap_prev) <= rel_tol * max(abs(extrap), 1e-12):
                return max(extrap, 0.0), a
            extrap_prev = extrap
    return max(extrap_prev, 0.0), a

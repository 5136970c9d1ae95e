"""Variance of GUE linear statistics at finite n and in the limit.

Finite n
    ``Var(N_n[f]) = (n/2) iint (f(x) - f(y))^2 K_n(sqrt(n) x, sqrt(n) y)^2 dx dy``
    is evaluated on composite Gauss-Legendre grids wide enough to hold the
    whole spectrum (the integrand is entire in both variables once ``f`` is
    split at its breakpoints). The symmetrized form built on ``Psi_n`` is
    reported next to it for comparison.

Limit
    ``V_GUE[f] = (1/4pi^2) iint ((f(x)-f(y))/(x-y))^2 (4-xy) / (sqrt(4-x^2) sqrt(4-y^2))``
    is computed twice: on offset theta grids, and through the cosine
    coefficients of ``f(2 cos t)`` as ``(1/4) sum k c_k^2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _accel
from .errors import QuadratureError
from .hermite import psi_pair_array
from .kernel import _diag_from_pair
from .quadrature import (Grid1D, Scheme, cheb_coeffs, composite_gauss_legendre, integrate_2d,
                         offset_theta_grid2d, quotient_integral, theta_grid)
from .testfns import TestFunction

PANEL_ORDER = 24
M_FINITE = 1200
M_LIMIT = 2000
K_CHEB = 2048
REFINE_FACTOR = 1.5
THETA_DENSITY = 1.5

_FOUR_PI2 = 4.0 * math.pi ** 2


@dataclass(frozen=True)
class WignerVarianceInput:
    kappa2: float
    kappa4: float


@dataclass(frozen=True)
class VarianceReport:
    n: int
    var_exact: float
    var_exact_error: float
    var_psi: float
    v_limit_quad: float
    v_limit_cheb: float
    quad_error_estimate: float
    edge_fraction: Optional[float] = None
    delta: Optional[float] = None


def spectral_half_width(n):
    """Half-width (scaled units) beyond which ``psi_n``, ``psi_{n-1}`` are negligible.

    The edge sits at ``2 sqrt(n)`` unscaled; the Airy tail decays like
    ``exp(-(2/3) s^{3/2})`` in ``s = (t - 2 sqrt n) n^{1/6}``, and ``s = 15``
    puts the squared functions below double precision.
    """
    return (2.0 * math.sqrt(n + 1.0) + 15.0 * (n + 1.0) ** (-1.0 / 6.0) + 2.0) / math.sqrt(n)


def _spectral_grid(f, n, m, lo, hi, density=1.0) -> Grid1D:
    """Composite GL grid resolving degree-n oscillation on ``(lo, hi)``.

    Functions whose bandwidth exceeds ``n`` get panels uniform in
    ``theta = arccos(x/2)`` inside ``[-2, 2]``, where both their cosine
    modes and the kernel oscillate at a steady rate.
    """
    bw = getattr(f, "bandwidth", 0)
    if bw > n and lo < -2.0 and hi > 2.0:
        return _theta_spectral_grid(f, n, m, lo, hi, density)
    per_unit = max(density * (n + 10.0), m / (hi - lo))
    panels = max(1, int(math.ceil((hi - lo) * per_unit / PANEL_ORDER)))
    breaks = tuple(getattr(f, "breakpoints", ()))
    graded = tuple(getattr(f, "graded", ()))
    return composite_gauss_legendre(lo, hi, panels, PANEL_ORDER, breaks, graded)


def _theta_spectral_grid(f, n, m, lo, hi, density, order=PANEL_ORDER):
    per_theta = max(THETA_DENSITY * density * (max(n, f.bandwidth) + 10.0), m / math.pi)
    panels = max(1, int(math.ceil(math.pi * per_theta / order)))
    breaks = tuple(math.acos(b / 2.0) for b in getattr(f, "breakpoints", ()) if -2.0 < b < 2.0)
    inner = composite_gauss_legendre(0.0, math.pi, panels, order, breaks)
    x_in = 2.0 * np.cos(inner.nodes[::-1])
    w_in = 2.0 * np.sin(inner.nodes[::-1]) * inner.weights[::-1]
    per_unit = max(density * (n + 10.0), m / (hi - lo))
    tails = []
    for a, b in ((lo, -2.0), (2.0, hi)):
        tp = max(2, int(math.ceil((b - a) * per_unit / order)))
        tails.append(composite_gauss_legendre(a, b, tp, order))
    nodes = np.concatenate([tails[0].nodes, x_in, tails[1].nodes])
    weights = np.concatenate([tails[0].weights, w_in, tails[1].weights])
    return Grid1D(nodes, weights, (float(lo), float(hi)), Scheme.GAUSS_LEGENDRE)


def _shifted_grid(f, n, m, lo, hi, density=1.0) -> Grid1D:
    """Same resolution as :func:`_spectral_grid` but panels shifted half a
    panel and one more node per panel, so no node is shared with it."""
    if getattr(f, "bandwidth", 0) > n and lo < -2.0 and hi > 2.0:
        return _theta_spectral_grid(f, n, m, lo, hi, density, order=PANEL_ORDER + 1)
    per_unit = max(density * (n + 10.0), m / (hi - lo))
    panels = max(1, int(math.ceil((hi - lo) * per_unit / PANEL_ORDER)))
    h = (hi - lo) / panels
    breaks = tuple(lo + (k + 0.5) * h for k in range(panels))
    breaks += tuple(getattr(f, "breakpoints", ()))
    return composite_gauss_legendre(lo, hi, 1, PANEL_ORDER + 1, breaks, tuple(getattr(f, "graded", ())))


def _check_n(n):
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValueError(f"degree must be a positive integer, got {n!r}")
    return int(n)


def _eval(f, x):
    vals = np.asarray(f(x), dtype=np.float64)
    if not np.all(np.isfinite(vals)):
        j = int(np.flatnonzero(~np.isfinite(vals))[0])
        raise QuadratureError(f"test function is not finite at x={x.flat[j]!r}")
    return vals


def _kernel_square_split(f, n, m, delta=None, density=1.0):
    n = _check_n(n)
    half = spectral_half_width(n)
    grid = _spectral_grid(f, n, m, -half, half, density)
    x = grid.nodes
    t = math.sqrt(n) * x
    a, b = psi_pair_array(n, t)
    # scaled coordinates: K_n(sx, sy) = (a_x b_y - b_x a_y) / (x - y)
    kdiag = _diag_from_pair(n, t, a, b)
    fx = _eval(f, x)
    if delta is None:
        edge = np.zeros(x.size, dtype=np.bool_)
    else:
        edge = np.abs(x) >= 2.0 - delta
    eps = 1e-6
    e_sum, b_sum = _accel.kernel_square_sums(x, grid.weights, fx, a, b, kdiag, edge, eps)
    return 0.5 * n * e_sum, 0.5 * n * b_sum


def exact_variance(f: TestFunction, n, m=M_FINITE, *, with_error=False):
    """``Var(N_n[f])`` from the kernel-square formula.

    With ``with_error=True`` returns ``(value, err)`` where ``err`` compares
    against a grid refined by a factor 1.5 in node density.
    """
    e, b = _kernel_square_split(f, n, m)
    value = e + b
    if not with_error:
        return value
    e2, b2 = _kernel_square_split(f, n, int(REFINE_FACTOR * m), density=REFINE_FACTOR)
    return value, abs((e2 + b2) - value)


def psi_form_variance(f: TestFunction, n, m=M_FINITE):
    """``n iint F(x, y) Psi_n(x, y) dx dy`` with ``F`` the squared difference
    quotient of ``f``.

    Uses the prefactor ``n`` of the symmetrized form and the same domain as
    :func:`exact_variance`, so the two differ only through ``Psi_n``. (On
    ``[-2, 2]^2`` alone the form loses an O(n^{-1/3}) share of the edge mass
    of ``psi_n^2``.) The x and y grids are offset so the quotient is never
    formed at ``x = y``.
    """
    n = _check_n(n)
    half = spectral_half_width(n)
    gx = _spectral_grid(f, n, m, -half, half)
    gy = _shifted_grid(f, n, m, -half, half)
    s = math.sqrt(n)
    ax, bx = psi_pair_array(n, s * gx.nodes)
    ay, by = psi_pair_array(n, s * gy.nodes)
    fx = _eval(f, gx.nodes)
    fy = _eval(f, gy.nodes)
    rows = []
    wy = gy.weights
    for start in range(0, gx.nodes.size, 512):
        sl = slice(start, start + 512)
        d = gx.nodes[sl, None] - gy.nodes[None, :]
        q = (fx[sl, None] - fy[None, :]) / d
        psi_xy = (ax[sl, None] ** 2) * (ay[None, :] ** 2) - (ax[sl, None] * bx[sl, None]) * (ay * by)[None, :]
        rows.append(gx.weights[sl] * ((q * q * psi_xy) @ wy))
    return n * math.fsum(np.concatenate(rows))


def finite_n_variance(f: TestFunction, n, m=M_FINITE):
    """Return ``(var_exact, var_psi)``; ``var_exact`` is the contract value."""
    return exact_variance(f, n, m), psi_form_variance(f, n, m)


def expectation(f: TestFunction, n, m=M_FINITE):
    """``E sum f(lambda_j) = sqrt(n) int f(x) K_n(sqrt n x, sqrt n x) dx``.

    Integrated over ``[-2 - e, 2 + e]`` with ``e = 6 n^{-2/3}``.
    """
    n = _check_n(n)
    pad = 6.0 * n ** (-2.0 / 3.0)
    grid = _spectral_grid(f, n, m, -2.0 - pad, 2.0 + pad)
    t = math.sqrt(n) * grid.nodes
    a, b = psi_pair_array(n, t)
    dens = _diag_from_pair(n, t, a, b)
    return math.sqrt(n) * math.fsum(grid.weights * _eval(f, grid.nodes) * dens)


def _v_gue_at(f, m, mask=None):
    grid = offset_theta_grid2d(m)
    fx = _eval(f, grid.gx.nodes)
    fy = _eval(f, grid.gy.nodes)
    return quotient_integral(grid, fx, fy, weight=lambda x, y: 4.0 - x * y, mask=mask) / _FOUR_PI2


def v_gue(f: TestFunction, m=M_LIMIT):
    """Limiting variance on offset theta grids; returns ``(value, err)``.

    ``err`` is the change from the ``m // 2`` grid.
    """
    value = _v_gue_at(f, m)
    coarse = _v_gue_at(f, max(8, m // 2))
    return value, abs(value - coarse)


def v_gue_cheb(f: TestFunction, K=K_CHEB, m=None):
    """Limiting variance as ``(1/4) sum_{k=1}^K k c_k^2``."""
    if K < 1:
        raise ValueError("K must be >= 1")
    c = cheb_coeffs(f, K, m).coeffs
    k = np.arange(c.size)
    return 0.25 * math.fsum(k * c * c)


def v_gue_cheb_tail(f: TestFunction, K=K_CHEB, m=None):
    """Contribution of the top half ``K/2 < k <= K`` of the cosine series.

    For coefficients that decay monotonically this bounds the truncation
    error of :func:`v_gue_cheb` from above.
    """
    c = cheb_coeffs(f, K, m).coeffs
    k = np.arange(c.size)
    top = k > K // 2
    return 0.25 * math.fsum(k[top] * c[top] ** 2)


def v_wigner(f: TestFunction, cum: WignerVarianceInput, m=M_LIMIT):
    """Wigner limiting variance: ``V_GUE`` plus the two cumulant corrections.

    ``+ kappa4/(4pi^2) (int f (2-x^2)/sqrt(4-x^2))^2``
    ``- (kappa2-2)/(4pi^2) (int f x (2-x^2)/sqrt(4-x^2))^2``
    """
    base, _ = v_gue(f, m)
    g = theta_grid(m)
    i1 = g.integrate(lambda x: f(x) * (2.0 - x * x))
    i2 = g.integrate(lambda x: f(x) * x * (2.0 - x * x))
    return base + cum.kappa4 / _FOUR_PI2 * i1 * i1 - (cum.kappa2 - 2.0) / _FOUR_PI2 * i2 * i2


def semicircle_functional_1(f: TestFunction, n, m=M_FINITE):
    """``(sqrt(n) int f psi_n(sqrt n x)^2 dx,  (1/pi) int f / sqrt(4-x^2) dx)``."""
    n = _check_n(n)
    half = spectral_half_width(n)
    grid = _spectral_grid(f, n, m, -half, half)
    a, _ = psi_pair_array(n, math.sqrt(n) * grid.nodes)
    finite = math.sqrt(n) * math.fsum(grid.weights * _eval(f, grid.nodes) * a * a)
    limit = theta_grid(max(m, M_LIMIT)).integrate(f) / math.pi
    return finite, limit


def semicircle_functional_2(f: TestFunction, n, m=M_FINITE):
    """``(sqrt(n) int f psi_n psi_{n-1} dx,  (1/pi) int x f / (2 sqrt(4-x^2)) dx)``."""
    n = _check_n(n)
    half = spectral_half_width(n)
    grid = _spectral_grid(f, n, m, -half, half)
    a, b = psi_pair_array(n, math.sqrt(n) * grid.nodes)
    finite = math.sqrt(n) * math.fsum(grid.weights * _eval(f, grid.nodes) * a * b)
    limit = theta_grid(max(m, M_LIMIT)).integrate(lambda x: 0.5 * x * f(x)) / math.pi
    return finite, limit


def psi2d_functional(H, n, m=M_FINITE, *, domain="spectral"):
    """``(n iint H Psi_n,  (1/4pi^2) iint H (4-xy)/(sqrt(4-x^2) sqrt(4-y^2)))``.

    ``H(x, y)`` must accept broadcast arrays. With ``domain="spectral"`` the
    finite-n integral runs over the same widened square as the other
    functionals, with ``H`` extended past ``[-2, 2]`` by clamping its
    arguments; ``domain="square"`` restricts it to ``[-2, 2]^2``, which loses
    edge mass of order ``n^{-1/3}``.
    """
    n = _check_n(n)
    if domain == "spectral":
        half = spectral_half_width(n)
    elif domain == "square":
        half = 2.0
    else:
        raise ValueError("domain must be 'spectral' or 'square'")
    grid = _spectral_grid(None, n, m, -half, half)
    x = grid.nodes
    w = grid.weights
    xc = np.clip(x, -2.0, 2.0)
    a, b = psi_pair_array(n, math.sqrt(n) * x)
    aa = a * a
    ab = a * b
    rows = []
    for start in range(0, x.size, 512):
        sl = slice(start, start + 512)
        X, Y = np.broadcast_arrays(xc[sl, None], xc[None, :])
        h = np.asarray(H(X, Y), dtype=np.float64)
        if not np.all(np.isfinite(h)):
            raise QuadratureError("H is not finite on the grid")
        psi_xy = aa[sl, None] * aa[None, :] - ab[sl, None] * ab[None, :]
        rows.append(w[sl] * ((h * psi_xy) @ w))
    finite = n * math.fsum(np.concatenate(rows))
    limit = integrate_2d(offset_theta_grid2d(max(m, M_LIMIT)),
                         lambda X, Y: np.asarray(H(X, Y), dtype=np.float64) * (4.0 - X * Y)) / _FOUR_PI2
    return finite, limit


def edge_bulk_split(f: TestFunction, n, delta, m=M_FINITE):
    """Split ``var_exact`` over the edge region and its complement.

    The edge region holds every pair with ``|x| >= 2 - delta`` or
    ``|y| >= 2 - delta`` (including the thin spectral tail past 2).
    Returns ``(edge_contrib, bulk_contrib, limit_edge)``, the last being the
    limiting-variance integral restricted to the same region.
    """
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    edge, bulk = _kernel_square_split(f, n, m, delta=delta)
    cut = 2.0 - delta
    limit_edge = _v_gue_at(f, max(m, M_LIMIT),
                           mask=lambda x, y: (np.abs(x) >= cut) | (np.abs(y) >= cut))
    return edge, bulk, limit_edge


def variance_growth(f: TestFunction, n_list, m=M_FINITE):
    """Table ``[(n, var_exact), ...]`` over increasing degrees."""
    n_list = [int(n) for n in n_list]
    if not n_list:
        raise ValueError("n_list must be non-empty")
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ValueError("n_list must be strictly increasing")
    return [(n, exact_variance(f, n, m)) for n in n_list]


def variance_report(f: TestFunction, n, m_finite=M_FINITE, m_limit=M_LIMIT, K=K_CHEB, delta=None):
    var_exact, var_err = exact_variance(f, n, m_finite, with_error=True)
    var_psi = psi_form_variance(f, n, m_finite)
    v_quad, q_err = v_gue(f, m_limit)
    v_cheb = v_gue_cheb(f, K)
    edge_fraction = None
    if delta is not None:
        e, b, _ = edge_bulk_split(f, n, delta, m_finite)
        total = e + b
        edge_fraction = e / total if total > 0 else 0.0
    return VarianceReport(n=int(n), var_exact=var_exact, var_exact_error=var_err, var_psi=var_psi,
                          v_limit_quad=v_quad, v_limit_cheb=v_cheb, quad_error_estimate=q_err,
                          edge_fraction=edge_fraction, delta=delta)

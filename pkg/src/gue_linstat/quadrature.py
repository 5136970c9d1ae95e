"""Quadrature grids on [-2, 2] and the Chebyshev cosine transform.

Three families are provided:

* Gauss-Legendre rules (single and composite, with breakpoints), used for
  finite-n integrals whose integrands are smooth but oscillatory;
* the theta substitution ``x = 2 cos(theta)``, which absorbs the
  ``1/sqrt(4 - x^2)`` weight of the limiting variance functional;
* offset 2-D tensor grids, which never place an x-node on a y-node so that
  difference quotients ``(f(x) - f(y)) / (x - y)`` are always defined.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.fft import dct
from scipy.special import roots_legendre

from .errors import QuadratureError

MAX_NODES = 10 ** 6


class Scheme(str, enum.Enum):
    GAUSS_LEGENDRE = "gauss_legendre"
    THETA_SUBSTITUTED = "theta_substituted"
    UNIFORM_MIDPOINT = "uniform_midpoint"


class DiagonalPolicy(str, enum.Enum):
    OFFSET_GRIDS = "offset_grids"
    EXCISE_BAND = "excise_band"


@dataclass(frozen=True, eq=False)
class Grid1D:
    nodes: np.ndarray
    weights: np.ndarray
    domain: tuple
    scheme: Scheme

    def integrate(self, g):
        """``sum_j w_j g(x_j)`` for a vectorized ``g``."""
        vals = np.asarray(g(self.nodes), dtype=np.float64)
        if not np.all(np.isfinite(vals)):
            j = int(np.flatnonzero(~np.isfinite(vals))[0])
            raise QuadratureError(f"integrand is not finite at x={self.nodes[j]!r}")
        return math.fsum(self.weights * vals)


@dataclass(frozen=True, eq=False)
class Grid2D:
    gx: Grid1D
    gy: Grid1D
    diagonal_policy: DiagonalPolicy = DiagonalPolicy.OFFSET_GRIDS
    band: float = 0.0


@dataclass(frozen=True, eq=False)
class ChebSeries:
    """``f(x) = sum_k c_k T_k(x/2)`` on [-2, 2]."""

    coeffs: np.ndarray

    def __call__(self, x):
        u = np.clip(np.asarray(x, dtype=np.float64) / 2.0, -1.0, 1.0)
        return np.polynomial.chebyshev.chebval(u, self.coeffs)


def _check_count(m):
    if m < 1:
        raise ValueError(f"node count must be >= 1, got {m}")
    if m > MAX_NODES:
        raise ValueError(f"node count {m} exceeds {MAX_NODES}")


def gauss_legendre(m, lo=-1.0, hi=1.0) -> Grid1D:
    """Gauss-Legendre rule with ``m`` nodes mapped to ``(lo, hi)``."""
    _check_count(m)
    if not lo < hi:
        raise ValueError("need lo < hi")
    x, w = roots_legendre(m)
    half = 0.5 * (hi - lo)
    nodes = 0.5 * (hi + lo) + half * x
    return Grid1D(nodes, half * w, (float(lo), float(hi)), Scheme.GAUSS_LEGENDRE)


def _graded_edges(lo, hi, graded, levels=14, ratio=0.2):
    """Refine panel edges geometrically toward each point in ``graded``."""
    extra = []
    for g in graded:
        if not lo <= g <= hi:
            continue
        for side in (-1.0, 1.0):
            span = (hi - g) if side > 0 else (g - lo)
            if span <= 0:
                continue
            h = min(span, 0.05)
            for _ in range(levels):
                extra.append(g + side * h)
                h *= ratio
    return extra


def composite_gauss_legendre(lo, hi, panels, order=24, breakpoints=(), graded=()) -> Grid1D:
    """Composite Gauss-Legendre rule.

    ``panels`` equal panels cover ``(lo, hi)``; every interior breakpoint
    becomes a panel edge, and panels are refined geometrically toward the
    points in ``graded`` (use it for algebraic singularities such as
    ``|x|^alpha``).
    """
    if panels < 1:
        raise ValueError("need at least one panel")
    if not lo < hi:
        raise ValueError("need lo < hi")
    edges = [np.linspace(lo, hi, panels + 1)]
    inner = [b for b in tuple(breakpoints) + tuple(graded) if lo < b < hi]
    edges.append(np.asarray(inner, dtype=np.float64))
    edges.append(np.asarray(_graded_edges(lo, hi, graded), dtype=np.float64))
    edges = np.unique(np.concatenate(edges))
    edges = edges[(edges >= lo) & (edges <= hi)]
    x0, w0 = roots_legendre(order)
    a = edges[:-1, None]
    b = edges[1:, None]
    nodes = 0.5 * (a + b) + 0.5 * (b - a) * x0[None, :]
    weights = 0.5 * (b - a) * w0[None, :]
    nodes = nodes.ravel()
    if nodes.size > MAX_NODES:
        raise ValueError(f"composite rule would need {nodes.size} nodes")
    return Grid1D(nodes, weights.ravel(), (float(lo), float(hi)), Scheme.GAUSS_LEGENDRE)


def uniform_midpoint(m, lo, hi) -> Grid1D:
    _check_count(m)
    h = (hi - lo) / m
    nodes = lo + (np.arange(m) + 0.5) * h
    return Grid1D(nodes, np.full(m, h), (float(lo), float(hi)), Scheme.UNIFORM_MIDPOINT)


def theta_grid(m) -> Grid1D:
    """Midpoint rule in ``theta`` for ``int g(x) / sqrt(4 - x^2) dx``.

    Nodes are ``2 cos(theta_j)`` with ``theta_j`` the cell midpoints of a
    uniform partition of ``(0, pi)``; every weight is ``pi / m``. Nodes are
    returned in increasing order.
    """
    _check_count(m)
    theta = (np.arange(m) + 0.5) * math.pi / m
    nodes = 2.0 * np.cos(theta[::-1])
    return Grid1D(nodes, np.full(m, math.pi / m), (-2.0, 2.0), Scheme.THETA_SUBSTITUTED)


def theta_grid_shifted(m) -> Grid1D:
    """Theta rule on the partition shifted by half a cell.

    Cells are ``[(j - 1/2) h, (j + 1/2) h]`` clipped to ``[0, pi]`` with
    ``h = pi / m``: ``m - 1`` full interior cells and two half cells at the
    ends. No node coincides with a node of :func:`theta_grid` for the same
    ``m``.
    """
    _check_count(m)
    h = math.pi / m
    inner = np.arange(1, m) * h
    theta = np.concatenate(([0.25 * h], inner, [math.pi - 0.25 * h]))
    weights = np.concatenate(([0.5 * h], np.full(m - 1, h), [0.5 * h]))
    nodes = 2.0 * np.cos(theta[::-1])
    return Grid1D(nodes, weights[::-1].copy(), (-2.0, 2.0), Scheme.THETA_SUBSTITUTED)


def offset_theta_grid2d(m) -> Grid2D:
    return Grid2D(theta_grid(m), theta_grid_shifted(m), DiagonalPolicy.OFFSET_GRIDS)


def integrate_2d(grid: Grid2D, F, block=512):
    """``sum_i sum_j wx_i wy_j F(x_i, y_j)``.

    ``F`` is called on broadcast 2-D arrays ``(X, Y)`` a block of rows at a
    time. Under ``excise_band`` the pairs with ``|x - y| < band`` get zero
    weight and ``F`` is not consulted there. Row sums are combined with
    ``math.fsum`` so the result does not depend on the block size.
    """
    x = grid.gx.nodes
    y = grid.gy.nodes
    wy = grid.gy.weights
    rows = []
    for start in range(0, x.size, block):
        xs = x[start:start + block, None]
        X, Y = np.broadcast_arrays(xs, y[None, :])
        if grid.diagonal_policy is DiagonalPolicy.EXCISE_BAND:
            keep = np.abs(X - Y) >= grid.band
            vals = np.zeros(X.shape)
            vals[keep] = np.asarray(F(X[keep], Y[keep]), dtype=np.float64)
        else:
            with np.errstate(divide="ignore", invalid="ignore"):
                vals = np.asarray(F(X, Y), dtype=np.float64)
            vals = np.broadcast_to(vals, X.shape)
        bad = ~np.isfinite(vals)
        if bad.any():
            i, j = np.argwhere(bad)[0]
            raise QuadratureError(
                f"integrand is not finite at (x, y) = ({X[i, j]!r}, {Y[i, j]!r})")
        rows.append(grid.gx.weights[start:start + block] * (vals @ wy))
    return math.fsum(np.concatenate(rows))


def quotient_integral(grid: Grid2D, fx, fy, weight=None, mask=None, block=512):
    """``sum_ij wx_i wy_j ((fx_i - fy_j) / (x_i - y_j))^2 W(x_i, y_j)``.

    ``fx`` and ``fy`` are the function values at the two node sets, so the
    test function is evaluated once per axis rather than once per pair.
    ``weight`` and ``mask`` are optional vectorized bivariate callables.
    """
    x = grid.gx.nodes
    y = grid.gy.nodes
    wy = grid.gy.weights
    rows = []
    for start in range(0, x.size, block):
        sl = slice(start, start + block)
        X, Y = np.broadcast_arrays(x[sl, None], y[None, :])
        d = X - Y
        if grid.diagonal_policy is DiagonalPolicy.EXCISE_BAND:
            keep = np.abs(d) >= grid.band
        else:
            keep = np.ones(d.shape, dtype=bool)
        if mask is not None:
            keep &= mask(X, Y)
        with np.errstate(divide="ignore", invalid="ignore"):
            q = (fx[sl, None] - fy[None, :]) / d
            vals = q * q
        if weight is not None:
            vals = vals * weight(X, Y)
        vals = np.where(keep, vals, 0.0)
        bad = ~np.isfinite(vals)
        if bad.any():
            i, j = np.argwhere(bad)[0]
            raise QuadratureError(
                f"integrand is not finite at (x, y) = ({X[i, j]!r}, {Y[i, j]!r})")
        rows.append(grid.gx.weights[sl] * (vals @ wy))
    return math.fsum(np.concatenate(rows))


def with_refinement(compute, m, minimum=8):
    """Evaluate ``compute(m)`` and ``compute(m // 2)``; return ``(value, |diff|)``."""
    value = compute(m)
    coarse = compute(max(minimum, m // 2))
    return value, abs(value - coarse)


def cheb_coeffs(f, K, m=None) -> ChebSeries:
    """Cosine coefficients of ``theta -> f(2 cos theta)``.

    ``c_0 = (1/pi) int f(2cos t) dt``, ``c_k = (2/pi) int f(2cos t) cos(kt) dt``,
    both by the ``m``-point midpoint rule in ``theta`` (a type-II DCT).
    """
    if K < 0:
        raise ValueError("K must be >= 0")
    if m is None:
        m = max(4 * K, 64)
    if m < 4 * K:
        raise ValueError(f"need m >= 4K, got m={m}, K={K}")
    theta = (np.arange(m) + 0.5) * math.pi / m
    vals = np.asarray(f(2.0 * np.cos(theta)), dtype=np.float64)
    c = dct(vals, type=2) / m
    c[0] *= 0.5
    out = np.zeros(K + 1)
    top = min(K + 1, m)
    out[:top] = c[:top]
    return ChebSeries(out)

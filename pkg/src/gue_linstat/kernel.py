"""Christoffel-Darboux kernel of the GUE and its correlation determinants."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hermite import psi_pair_array
from .quadrature import composite_gauss_legendre

MAX_POINTS = 8


@dataclass(frozen=True)
class KernelContext:
    """Degree ``n`` and the width of the confluent band around the diagonal.

    Pairs with ``|a - b| <= diag_band`` use the confluent limit of the
    Christoffel-Darboux quotient instead of the quotient itself. The default
    band is ``1e-6 sqrt(n)``, capped at ``1e-3``.
    """

    n: int
    diag_band: float = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("kernel degree must be >= 1")
        if self.diag_band is None:
            object.__setattr__(self, "diag_band", min(1e-6 * math.sqrt(self.n), 1e-3))
        if not 0.0 < self.diag_band <= 1e-3:
            raise ValueError("diag_band must lie in (0, 1e-3]")


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    points: tuple
    entries: np.ndarray


def diagonal(n, t):
    """``K_n(t, t) = n (psi_n^2 + psi_{n-1}^2) - sqrt(n) t psi_n psi_{n-1}``.

    This is the confluent Christoffel-Darboux value with the derivatives
    eliminated through the recurrence.
    """
    t = np.asarray(t, dtype=np.float64)
    a, b = psi_pair_array(n, t)
    return _diag_from_pair(n, t, a, b)


def _diag_from_pair(n, t, a, b):
    return n * (a * a + b * b) - math.sqrt(n) * t * a * b


def kernel(ctx: KernelContext, a, b):
    """``K_n(a, b)`` in unscaled coordinates; broadcasts over arrays."""
    a_arr, b_arr = np.broadcast_arrays(np.asarray(a, dtype=np.float64),
                                       np.asarray(b, dtype=np.float64))
    if not (np.all(np.isfinite(a_arr)) and np.all(np.isfinite(b_arr))):
        raise ValueError("kernel arguments must be finite")
    n = ctx.n
    pa, qa = psi_pair_array(n, a_arr)
    pb, qb = psi_pair_array(n, b_arr)
    d = a_arr - b_arr
    close = np.abs(d) <= ctx.diag_band
    with np.errstate(divide="ignore", invalid="ignore"):
        cd = math.sqrt(n) * (pa * qb - qa * pb) / d
    if close.any():
        mid = 0.5 * (a_arr[close] + b_arr[close])
        cd = np.array(cd, copy=True)
        cd[close] = diagonal(n, mid)
    return float(cd) if cd.ndim == 0 else cd


def kernel_matrix(ctx: KernelContext, points):
    """Matrix ``K_n(p_i, p_j)``."""
    p = np.asarray(points, dtype=np.float64)
    return kernel(ctx, p[:, None], p[None, :])


def psi2d(ctx: KernelContext, x, y):
    """``Psi_n(x, y)`` with scaled arguments, as the variance display defines it:

    ``psi_n(sx)^2 psi_n(sy)^2 - psi_n(sx) psi_{n-1}(sx) psi_n(sy) psi_{n-1}(sy)``
    with ``s = sqrt(n)``.
    """
    s = math.sqrt(ctx.n)
    ax, bx = psi_pair_array(ctx.n, s * np.asarray(x, dtype=np.float64))
    ay, by = psi_pair_array(ctx.n, s * np.asarray(y, dtype=np.float64))
    out = (ax * ax) * (ay * ay) - (ax * bx) * (ay * by)
    return float(out) if np.ndim(out) == 0 else out


def correlation_matrix(ctx: KernelContext, points) -> CorrelationMatrix:
    pts = tuple(float(p) for p in points)
    if not 1 <= len(pts) <= MAX_POINTS:
        raise ValueError(f"correlation needs 1..{MAX_POINTS} points, got {len(pts)}")
    return CorrelationMatrix(pts, kernel_matrix(ctx, pts))


def correlation(ctx: KernelContext, points):
    """k-point correlation ``det(K_n(p_i, p_j))`` for ``1 <= k <= 8``."""
    mat = correlation_matrix(ctx, points)
    if len(mat.points) == 1:
        return float(mat.entries[0, 0])
    # LU with partial pivoting
    return float(np.linalg.det(mat.entries))


def kernel_direct_sum(n, a, b):
    """``sum_{j<n} psi_j(a) psi_j(b)`` by running the recurrence over all j.

    Independent of the Christoffel-Darboux quotient; O(n) per point.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    pa, pb = np.exp(-a * a / 4.0) / (2 * math.pi) ** 0.25, np.exp(-b * b / 4.0) / (2 * math.pi) ** 0.25
    qa, qb = np.zeros_like(pa), np.zeros_like(pb)
    total = pa * pb
    for k in range(n - 1):
        c1, c2 = 1.0 / math.sqrt(k + 1.0), math.sqrt(k / (k + 1.0))
        pa, qa = a * pa * c1 - c2 * qa, pa
        pb, qb = b * pb * c1 - c2 * qb, pb
        total = total + pa * pb
    return total


def _line_grid(n, half_width, order=24):
    panels = max(4, int(math.ceil(2.0 * half_width * (math.sqrt(n) + 4.0) / order * 2.0)))
    return composite_gauss_legendre(-half_width, half_width, panels, order)


def kernel_trace(ctx: KernelContext, half_width=None):
    """``int K_n(t, t) dt`` over ``[-3 sqrt(n), 3 sqrt(n)]`` (or ``half_width``)."""
    hw = 3.0 * math.sqrt(ctx.n) if half_width is None else half_width
    g = _line_grid(ctx.n, hw)
    return math.fsum(g.weights * diagonal(ctx.n, g.nodes))


def reproduced(ctx: KernelContext, a, b, half_width=None):
    """``int K_n(a, z) K_n(z, b) dz``; equals ``K_n(a, b)`` for a projection kernel."""
    hw = 3.0 * math.sqrt(ctx.n) if half_width is None else half_width
    g = _line_grid(ctx.n, hw)
    ka = kernel(ctx, a, g.nodes)
    kb = kernel(ctx, g.nodes, b)
    return math.fsum(g.weights * ka * kb)

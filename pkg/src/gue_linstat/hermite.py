"""Normalized Hermite oscillator functions and the Erdelyi edge envelope.

``psi_n(t) = exp(-t^2/4) h_n(t) / (sqrt(n!) (2 pi)^{1/4})`` with ``h_n`` the
probabilists' Hermite polynomial. The functions are orthonormal on the real
line and satisfy

    t psi_n = sqrt(n+1) psi_{n+1} + sqrt(n) psi_{n-1}
    psi_n'  = -(t/2) psi_n + sqrt(n) psi_{n-1}

All evaluation goes through the upward recurrence on ``psi_k`` itself, so
degrees in the tens of thousands are fine.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _accel

MAX_DEGREE = 100_000

# |phi'| tends to 3^{1/3} as u -> 1
_DPHI_AT_EDGE = 3.0 ** (1.0 / 3.0)


@dataclass(frozen=True)
class OscillatorEval:
    """``psi_n`` and ``psi_{n-1}`` at one unscaled point ``t``."""

    n: int
    t: float
    value_n: float
    value_nm1: float


@dataclass(frozen=True)
class EdgeEnvelope:
    """Envelope ``n^{-1/4} |phi'(u)|^{-1/2}`` at scaled coordinate ``x``."""

    n: int
    x: float
    bound: float


def _check_degree(n, max_degree=None):
    limit = MAX_DEGREE if max_degree is None else max_degree
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise TypeError(f"degree must be an integer, got {type(n).__name__}")
    if n < 0:
        raise ValueError(f"degree must be non-negative, got {n}")
    if n > limit:
        raise ValueError(f"degree {n} exceeds the configured maximum {limit}")
    return int(n)


def _as_points(t):
    arr = np.atleast_1d(np.asarray(t, dtype=np.float64))
    if not np.all(np.isfinite(arr)):
        raise ValueError("evaluation points must be finite")
    return arr


def psi_pair_array(n, t, *, max_degree=None):
    """Vectorized ``(psi_n(t), psi_{n-1}(t))`` over an array of points.

    ``psi_{-1}`` is taken to be zero, so ``n = 0`` returns ``(psi_0, 0)``.
    """
    n = _check_degree(n, max_degree)
    arr = _as_points(t)
    shape = np.shape(t)
    a, b = _accel.hermite_pair(n, arr.ravel())
    return a.reshape(shape), b.reshape(shape)


def psi(n, t, *, max_degree=None):
    """Evaluate ``psi_n`` at ``t`` (scalar or array)."""
    value, _ = psi_pair_array(n, t, max_degree=max_degree)
    return float(value) if np.ndim(t) == 0 else value


def psi_pair_scaled(n, x, *, max_degree=None) -> OscillatorEval:
    """Return ``psi_n(sqrt(n) x)`` and ``psi_{n-1}(sqrt(n) x)`` from one pass."""
    if n < 1:
        raise ValueError("psi_pair_scaled needs n >= 1")
    t = math.sqrt(n) * float(x)
    a, b = psi_pair_array(n, t, max_degree=max_degree)
    return OscillatorEval(n=int(n), t=t, value_n=float(a), value_nm1=float(b))


def psi_derivative(n, t, *, max_degree=None):
    """``psi_n'(t)`` from the lowering identity, never by differencing."""
    a, b = psi_pair_array(n, t, max_degree=max_degree)
    t_arr = np.asarray(t, dtype=np.float64)
    out = -0.5 * t_arr * a + math.sqrt(n) * b
    return float(out) if np.ndim(t) == 0 else out


def _inner_abs(theta):
    """``|u sqrt(1-u^2)/2 - arccos(u)/2|`` at ``u = cos(theta)``.

    Equals ``(s - sin s) / 4`` with ``s = 2 theta``; small ``s`` uses the
    Taylor series to avoid cancellation.
    """
    s2 = 2.0 * theta
    out = s2 - np.sin(s2)
    small = s2 < 0.5
    if np.any(small):
        z = s2[small]
        z2 = z * z
        term = z * z2 / 6.0
        acc = term.copy()
        for k in range(2, 10):
            term = -term * z2 / ((2 * k) * (2 * k + 1))
            acc = acc + term
        out[small] = acc
    return 0.25 * out


def erdelyi_phi(u):
    """``(3/2) |u sqrt(1-u^2)/2 - arccos(u)/2|^{2/3}`` for ``0 < u <= 1``.

    The bracket is negative on ``[0, 1)``; its modulus is taken before the
    fractional power.
    """
    u_arr = np.asarray(u, dtype=np.float64)
    if np.any(~np.isfinite(u_arr)) or np.any(u_arr <= 0.0) or np.any(u_arr > 1.0):
        raise ValueError("erdelyi_phi is defined for 0 < u <= 1")
    theta = np.atleast_1d(np.arccos(u_arr))
    out = (1.5 * _inner_abs(theta) ** (2.0 / 3.0)).reshape(u_arr.shape)
    return float(out) if np.ndim(u) == 0 else out


def erdelyi_dphi(u):
    """``|phi'(u)|`` on ``[0, 1]``, continuous up to ``u = 1``."""
    u_arr = np.abs(np.asarray(u, dtype=np.float64))
    if np.any(~np.isfinite(u_arr)) or np.any(u_arr > 1.0):
        raise ValueError("erdelyi_dphi is defined for |u| <= 1")
    theta = np.atleast_1d(np.arccos(u_arr))
    at_edge = theta == 0.0
    th = np.where(at_edge, 0.5, theta)
    out = _inner_abs(th) ** (-1.0 / 3.0) * np.sin(th)
    out = np.where(at_edge, _DPHI_AT_EDGE, out).reshape(u_arr.shape)
    return float(out) if np.ndim(u) == 0 else out


def envelope_bound(n, x):
    """Array form of :func:`erdelyi_envelope`; returns the bare bound values."""
    if n < 1:
        raise ValueError("envelope needs n >= 1")
    x_arr = np.abs(np.asarray(x, dtype=np.float64))
    if np.any(~np.isfinite(x_arr)) or np.any(x_arr >= 2.0):
        raise ValueError("envelope is defined for |x| < 2")
    u = x_arr / math.sqrt(4.0 + 2.0 / n)
    out = n ** -0.25 * erdelyi_dphi(u) ** -0.5
    return float(out) if np.ndim(x) == 0 else out


def erdelyi_envelope(n, x) -> EdgeEnvelope:
    """Pointwise envelope for ``|psi_n(sqrt(n) x)|`` up to a constant.

    The argument of ``phi'`` is ``sqrt(n) x / (sqrt(2n+1) sqrt(2))``, which
    equals ``x / sqrt(4 + 2/n)``. Negative ``x`` uses ``|x|``.
    """
    return EdgeEnvelope(n=int(n), x=float(x), bound=envelope_bound(n, float(x)))


def airy_edge_values(n, *, max_degree=None):
    """Return ``(n^{1/12} psi_n(2 sqrt n), n^{-1/12} psi_n'(2 sqrt n))``."""
    if n < 1:
        raise ValueError("airy_edge_values needs n >= 1")
    t = 2.0 * math.sqrt(n)
    a, b = psi_pair_array(n, t, max_degree=max_degree)
    a = float(a)
    da = -0.5 * t * a + math.sqrt(n) * float(b)
    return n ** (1.0 / 12.0) * a, n ** (-1.0 / 12.0) * da


def bulk_sup(n, lo=-1.8, hi=1.8, points=20001):
    """Max over a dense grid in ``[lo, hi]`` of ``sqrt(n) psi_n(sqrt(n) x)^2``
    and of ``sqrt(n) |psi_{n-1} psi_n|``; returns both."""
    x = np.linspace(lo, hi, points)
    a, b = psi_pair_array(n, math.sqrt(n) * x)
    return float(math.sqrt(n) * np.max(a * a)), float(math.sqrt(n) * np.max(np.abs(a * b)))


def envelope_ratio(n, x):
    """``|psi_n(sqrt(n) x)| / envelope(n, x)`` (array in, array out)."""
    x = np.asarray(x, dtype=np.float64)
    a, _ = psi_pair_array(n, math.sqrt(n) * x)
    return np.abs(a) / envelope_bound(n, x)


def envelope_ratio_sup(n, x_max=1.99, points=40001):
    """Sup of :func:`envelope_ratio` over a dense grid on ``[-x_max, x_max]``."""
    return float(np.max(envelope_ratio(n, np.linspace(-x_max, x_max, points))))

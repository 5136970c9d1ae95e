"""Pure-numpy implementations of the hot loops.

These are the reference fallbacks for :mod:`gue_linstat._accel.numba_kernels`.
Each function has the same signature and returns the same values (up to
floating-point reassociation) as its compiled twin.
"""
import math

import numpy as np

_RESCALE_EXP = 500
_RESCALE_AT = 2.0 ** _RESCALE_EXP
_LOG2_NORM = 0.25 * math.log2(2.0 * math.pi)
# below this log2 magnitude psi_0 is seeded as mantissa/exponent
_SEED_LOG2_FLOOR = -1000.0


def hermite_pair(n, t):
    """Return ``(psi_n(t), psi_{n-1}(t))`` for a 1-D float array ``t``.

    Upward three-term recurrence on the normalized functions. Values are
    carried as ``mantissa * 2**exponent`` so neither the Gaussian seed nor
    the growth in the forbidden region can under/overflow.
    """
    t = np.ascontiguousarray(t, dtype=np.float64)
    log2_seed = -(t * t / 4.0) / math.log(2.0) - _LOG2_NORM
    direct = log2_seed > _SEED_LOG2_FLOOR
    expo = np.where(direct, 0, np.floor(log2_seed)).astype(np.int64)
    p = np.where(direct,
                 np.exp(-t * t / 4.0) / (2.0 * math.pi) ** 0.25,
                 np.exp2(log2_seed - expo))
    pm1 = np.zeros_like(t)
    for k in range(n):
        pn = t * p / math.sqrt(k + 1.0) - math.sqrt(k / (k + 1.0)) * pm1
        pm1 = p
        p = pn
        big = np.abs(p) > _RESCALE_AT
        if big.any():
            p = np.where(big, np.ldexp(p, -_RESCALE_EXP), p)
            pm1 = np.where(big, np.ldexp(pm1, -_RESCALE_EXP), pm1)
            expo = expo + np.where(big, _RESCALE_EXP, 0)
    return np.ldexp(p, expo), np.ldexp(pm1, expo)


def kernel_square_sums(x, w, fx, a, b, kdiag, edge, eps, block=256):
    """Weighted double sum of ``(f_i - f_j)^2 K_ij^2`` split by region.

    ``K_ij = (a_i b_j - b_i a_j) / (x_i - x_j)`` is the Christoffel-Darboux
    quotient in scaled coordinates; pairs closer than ``eps`` use the mean
    of the confluent diagonal values. A pair counts as *edge* when either
    node is flagged in ``edge``.

    Returns ``(edge_sum, bulk_sum)``.
    """
    m = x.shape[0]
    edge_sum = 0.0
    bulk_sum = 0.0
    for start in range(0, m, block):
        stop = min(start + block, m)
        xi = x[start:stop, None]
        d = xi - x[None, :]
        num = a[start:stop, None] * b[None, :] - b[start:stop, None] * a[None, :]
        close = np.abs(d) <= eps
        with np.errstate(divide="ignore", invalid="ignore"):
            k = np.where(close, 0.5 * (kdiag[start:stop, None] + kdiag[None, :]), num / d)
        df = fx[start:stop, None] - fx[None, :]
        c = (w[start:stop, None] * w[None, :]) * (df * df) * (k * k)
        c = np.where(df == 0.0, 0.0, c)
        on_edge = edge[start:stop, None] | edge[None, :]
        edge_sum += float(np.sum(np.where(on_edge, c, 0.0)))
        bulk_sum += float(np.sum(np.where(on_edge, 0.0, c)))
    return edge_sum, bulk_sum


def tridiagonalize(a):
    """Householder reduction of a complex Hermitian matrix, in place.

    Returns the real diagonal ``d`` and the moduli of the sub-diagonal ``e``
    (``e[n-1]`` is zero). Taking moduli is a diagonal unitary similarity, so
    the spectrum is unchanged.
    """
    n = a.shape[0]
    e = np.zeros(n)
    for k in range(n - 2):
        x = a[k + 1:, k]
        norm = math.sqrt(float(np.sum(x.real ** 2 + x.imag ** 2)))
        if norm == 0.0:
            continue
        x0 = x[0]
        phase = x0 / abs(x0) if x0 != 0 else 1.0
        alpha = -phase * norm
        v = x.copy()
        v[0] -= alpha
        tau = 2.0 / float(np.sum(v.real ** 2 + v.imag ** 2))
        sub = a[k + 1:, k + 1:]
        p = tau * (sub @ v)
        kk = 0.5 * tau * np.vdot(v, p)
        p -= kk * v
        sub -= np.outer(v, p.conj()) + np.outer(p, v.conj())
        e[k] = norm
    d = a.diagonal().real.copy()
    if n >= 2:
        e[n - 2] = abs(a[n - 1, n - 2])
    return d, e


def tql_eigenvalues(d, e, maxit):
    """Eigenvalues of a real symmetric tridiagonal matrix by implicit QL.

    ``d`` is the diagonal, ``e[i]`` couples ``i`` and ``i+1``. Returns the
    ascending eigenvalues and a convergence flag; at most ``maxit`` QL
    sweeps are spent on each eigenvalue.
    """
    n = d.shape[0]
    d = d.copy()
    e = e.copy()
    eps = 2.220446049250313e-16
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                if abs(e[m]) <= eps * (abs(d[m]) + abs(d[m + 1])):
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > maxit:
                return np.sort(d), False
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = 1.0
            c = 1.0
            p = 0.0
            i = m - 1
            deflated = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    deflated = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                i -= 1
            if deflated:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return np.sort(d), True

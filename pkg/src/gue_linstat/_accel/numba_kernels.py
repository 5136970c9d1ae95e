"""Numba-compiled versions of the hot loops.

Signatures and results mirror :mod:`gue_linstat._accel.numpy_kernels`.
All kernels release the GIL so thread pools in the Monte Carlo driver run
them concurrently.
"""
import math

import numpy as np
from numba import njit

from . import numpy_kernels

_RESCALE_EXP = 500
_RESCALE_AT = 2.0 ** _RESCALE_EXP
_LOG2_NORM = 0.25 * math.log2(2.0 * math.pi)
_SEED_LOG2_FLOOR = -1000.0
_LN2 = math.log(2.0)


@njit(cache=True, nogil=True)
def hermite_pair(n, t):
    m = t.shape[0]
    out_n = np.empty(m)
    out_nm1 = np.empty(m)
    c1 = np.empty(n)
    c2 = np.empty(n)
    for k in range(n):
        c1[k] = 1.0 / math.sqrt(k + 1.0)
        c2[k] = math.sqrt(k / (k + 1.0))
    for i in range(m):
        ti = t[i]
        log2_seed = -(ti * ti / 4.0) / _LN2 - _LOG2_NORM
        if log2_seed > _SEED_LOG2_FLOOR:
            expo = 0
            p = math.exp(-ti * ti / 4.0) / (2.0 * math.pi) ** 0.25
        else:
            expo = int(math.floor(log2_seed))
            p = math.exp((log2_seed - expo) * _LN2)
        pm1 = 0.0
        for k in range(n):
            pn = ti * p * c1[k] - c2[k] * pm1
            pm1 = p
            p = pn
            if abs(p) > _RESCALE_AT:
                p = math.ldexp(p, -_RESCALE_EXP)
                pm1 = math.ldexp(pm1, -_RESCALE_EXP)
                expo += _RESCALE_EXP
        out_n[i] = math.ldexp(p, expo)
        out_nm1[i] = math.ldexp(pm1, expo)
    return out_n, out_nm1


@njit(cache=True, nogil=True)
def kernel_square_sums(x, w, fx, a, b, kdiag, edge, eps):
    m = x.shape[0]
    edge_sum = 0.0
    bulk_sum = 0.0
    for i in range(m):
        acc_e = 0.0
        acc_b = 0.0
        for j in range(i + 1, m):
            df = fx[i] - fx[j]
            if df == 0.0:
                continue
            d = x[i] - x[j]
            if abs(d) <= eps:
                k = 0.5 * (kdiag[i] + kdiag[j])
            else:
                k = (a[i] * b[j] - b[i] * a[j]) / d
            c = w[j] * df * df * k * k
            if edge[i] or edge[j]:
                acc_e += c
            else:
                acc_b += c
        edge_sum += 2.0 * w[i] * acc_e
        bulk_sum += 2.0 * w[i] * acc_b
    return edge_sum, bulk_sum


@njit(cache=True, nogil=True)
def tridiagonalize(a):
    n = a.shape[0]
    d = np.empty(n)
    e = np.zeros(n)
    v = np.empty(n, dtype=np.complex128)
    p = np.empty(n, dtype=np.complex128)
    for k in range(n - 2):
        s = 0.0
        for i in range(k + 1, n):
            s += a[i, k].real ** 2 + a[i, k].imag ** 2
        norm = math.sqrt(s)
        if norm == 0.0:
            continue
        x0 = a[k + 1, k]
        ax0 = abs(x0)
        phase = x0 / ax0 if ax0 > 0.0 else 1.0 + 0.0j
        alpha = -phase * norm
        vv = 0.0
        for i in range(k + 1, n):
            v[i] = a[i, k]
        v[k + 1] -= alpha
        for i in range(k + 1, n):
            vv += v[i].real ** 2 + v[i].imag ** 2
        tau = 2.0 / vv
        for i in range(k + 1, n):
            acc = 0.0j
            for j in range(k + 1, n):
                acc += a[i, j] * v[j]
            p[i] = tau * acc
        kk = 0.0j
        for i in range(k + 1, n):
            kk += v[i].conjugate() * p[i]
        kk *= 0.5 * tau
        for i in range(k + 1, n):
            p[i] -= kk * v[i]
        for i in range(k + 1, n):
            vi = v[i]
            pi = p[i]
            for j in range(k + 1, n):
                a[i, j] -= vi * p[j].conjugate() + pi * v[j].conjugate()
        e[k] = norm
    for k in range(n):
        d[k] = a[k, k].real
    if n >= 2:
        e[n - 2] = abs(a[n - 1, n - 2])
    return d, e


# scalar algorithm: the interpreted source is compiled as-is
tql_eigenvalues = njit(cache=True, nogil=True)(numpy_kernels.tql_eigenvalues)

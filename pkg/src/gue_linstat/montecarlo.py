"""GUE spectra by Householder tridiagonalization and implicit QL, and
Monte Carlo summaries of linear statistics.

Every sample ``i`` of a run draws from its own PCG64 stream derived from
``SeedSequence(seed, spawn_key=(i,))``, so results do not depend on how
samples are scheduled across worker threads.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import stats

from . import _accel
from .errors import ConvergenceError

logger = logging.getLogger(__name__)

MAX_QL_SWEEPS = 50


@dataclass(frozen=True)
class GueSampler:
    """Reproducible source of n x n GUE matrices with entry variance 1/n.

    ``stream`` selects an independent substream of ``seed``; ``None`` uses
    the root stream.
    """

    n: int
    seed: int
    stream: Optional[int] = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("matrix dimension must be >= 1")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be an unsigned 64-bit integer")

    def rng(self):
        key = () if self.stream is None else (int(self.stream),)
        return np.random.Generator(np.random.PCG64(np.random.SeedSequence(self.seed, spawn_key=key)))

    def matrix(self):
        """Hermitian matrix: diagonal N(0, 1/n); off-diagonal real and
        imaginary parts N(0, 1/(2n)) each."""
        n = self.n
        rng = self.rng()
        diag = rng.standard_normal(n) / math.sqrt(n)
        iu = np.triu_indices(n, 1)
        re = rng.standard_normal(iu[0].size)
        im = rng.standard_normal(iu[0].size)
        a = np.zeros((n, n), dtype=np.complex128)
        a[iu] = (re + 1j * im) / math.sqrt(2.0 * n)
        a = a + a.conj().T
        a[np.diag_indices(n)] = diag
        return a


@dataclass(frozen=True, eq=False)
class EnsembleSummary:
    m: int
    mean: float
    variance: float
    skewness: float
    excess_kurtosis: float
    ks_distance: float
    v_reference: float
    centered_samples: np.ndarray
    raw_mean_stderr: float


@dataclass(frozen=True)
class CltDiagnostics:
    ks_distance: float
    ks_pvalue: float
    abs_skewness: float
    abs_excess_kurtosis: float
    v_predicted: float
    m: int


def eigvalsh_tridiagonal_ql(a, seed=None):
    """Ascending eigenvalues of a complex Hermitian matrix.

    The matrix is copied; raises :class:`ConvergenceError` if a QL sweep
    count exceeds ``MAX_QL_SWEEPS`` for some eigenvalue.
    """
    work = np.array(a, dtype=np.complex128, order="C", copy=True)
    d, e = _accel.tridiagonalize(work)
    evals, ok = _accel.tql_eigenvalues(d, e, MAX_QL_SWEEPS)
    if not ok:
        raise ConvergenceError(f"implicit QL did not converge (seed={seed})")
    return evals


def sample_spectrum(s: GueSampler):
    return eigvalsh_tridiagonal_ql(s.matrix(), seed=(s.seed, s.stream))


def gaussian_samples(m, v, seed):
    """``m`` draws from N(0, v) on the package's generator."""
    rng = GueSampler(1, seed).rng()
    return math.sqrt(v) * rng.standard_normal(m)


def ks_distance(samples, v):
    """Sup-norm distance between the empirical CDF and N(0, v).

    ``v = 0`` compares against the point mass at zero.
    """
    x = np.sort(np.asarray(samples, dtype=np.float64))
    m = x.size
    if v == 0.0:
        cdf = (x >= 0.0).astype(np.float64)
        cdf_left = (x > 0.0).astype(np.float64)
    else:
        cdf = cdf_left = stats.norm.cdf(x, scale=math.sqrt(v))
    hi = np.arange(1, m + 1) / m - cdf
    lo = cdf_left - np.arange(m) / m
    return float(min(1.0, max(hi.max(), lo.max(), 0.0)))


def statistic_values(f, n, m, seed, workers=1, progress=False):
    """``sum_j f(lambda_j)`` for ``m`` independent spectra, in sample order."""
    if m < 1:
        raise ValueError("sample count must be >= 1")

    def one(i):
        lam = sample_spectrum(GueSampler(n, seed, stream=i))
        return math.fsum(np.asarray(f(lam), dtype=np.float64))

    out = np.empty(m)
    if workers <= 1:
        for i in range(m):
            out[i] = one(i)
            if progress and (i + 1) % max(1, m // 10) == 0:
                logger.info("n=%d: %d/%d samples", n, i + 1, m)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for i, val in enumerate(pool.map(one, range(m))):
                out[i] = val
                if progress and (i + 1) % max(1, m // 10) == 0:
                    logger.info("n=%d: %d/%d samples", n, i + 1, m)
    return out


def summarize(values, v_reference=None) -> EnsembleSummary:
    """Center by the empirical mean and compute moments and the KS distance.

    Without ``v_reference`` the KS distance is taken against the sample
    variance.
    """
    values = np.asarray(values, dtype=np.float64)
    m = values.size
    mean = math.fsum(values) / m
    centered = values - mean
    var = math.fsum(centered * centered) / (m - 1) if m > 1 else 0.0
    m2 = math.fsum(centered ** 2) / m
    if m2 > 0.0:
        skew = (math.fsum(centered ** 3) / m) / m2 ** 1.5
        kurt = (math.fsum(centered ** 4) / m) / m2 ** 2 - 3.0
    else:
        skew = 0.0
        kurt = 0.0
    vref = var if v_reference is None else float(v_reference)
    return EnsembleSummary(m=m, mean=mean, variance=var, skewness=skew, excess_kurtosis=kurt,
                           ks_distance=ks_distance(centered, vref), v_reference=vref,
                           centered_samples=centered, raw_mean_stderr=math.sqrt(var / m))


def linear_statistic_samples(f, n, m, seed, *, v_reference=None, workers=1, progress=False) -> EnsembleSummary:
    """Draw ``m`` spectra and summarize ``N_n[f]`` (centered empirically)."""
    values = statistic_values(f, n, m, seed, workers=workers, progress=progress)
    return summarize(values, v_reference)


def clt_diagnostics(summary: EnsembleSummary, v_predicted) -> CltDiagnostics:
    """KS distance to N(0, v_predicted) plus |skewness| and |excess kurtosis|."""
    if v_predicted <= 0:
        raise ValueError("v_predicted must be positive")
    if summary.m < 50:
        raise ValueError("need at least 50 samples")
    x = summary.centered_samples
    res = stats.kstest(x, "norm", args=(0.0, math.sqrt(v_predicted)))
    return CltDiagnostics(ks_distance=ks_distance(x, v_predicted), ks_pvalue=float(res.pvalue),
                          abs_skewness=abs(summary.skewness),
                          abs_excess_kurtosis=abs(summary.excess_kurtosis),
                          v_predicted=float(v_predicted), m=summary.m)

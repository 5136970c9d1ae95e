import math

import numpy as np
import pytest

from gue_linstat import montecarlo as mc
from gue_linstat import variance
from gue_linstat.errors import ConvergenceError
from gue_linstat.testfns import builtin


def test_matrix_is_hermitian_and_reproducible():
    s = mc.GueSampler(6, seed=42, stream=3)
    a = s.matrix()
    assert np.array_equal(a, a.conj().T)
    assert np.array_equal(a, mc.GueSampler(6, seed=42, stream=3).matrix())
    assert not np.array_equal(a, mc.GueSampler(6, seed=42, stream=4).matrix())


def test_entry_variances():
    n = 300
    a = mc.GueSampler(n, seed=1).matrix()
    iu = np.triu_indices(n, 1)
    assert np.var(np.diag(a).real) * n == pytest.approx(1.0, rel=0.2)
    assert np.var(a[iu].real) * 2 * n == pytest.approx(1.0, rel=0.02)
    assert np.var(a[iu].imag) * 2 * n == pytest.approx(1.0, rel=0.02)


def test_sampler_guards():
    with pytest.raises(ValueError):
        mc.GueSampler(0, 1)
    with pytest.raises(ValueError):
        mc.GueSampler(3, -1)
    with pytest.raises(ValueError):
        mc.GueSampler(3, 2 ** 64)


@pytest.mark.parametrize("n", [1, 2, 7, 60])
def test_eigenvalues_match_lapack(n):
    a = mc.GueSampler(n, seed=n).matrix()
    ours = mc.eigvalsh_tridiagonal_ql(a)
    assert np.all(np.diff(ours) >= 0)
    assert np.allclose(ours, np.linalg.eigvalsh(a), atol=1e-12)


def test_eigensolver_reports_non_convergence(monkeypatch):
    monkeypatch.setattr(mc, "MAX_QL_SWEEPS", 0)
    with pytest.raises(ConvergenceError, match="seed"):
        mc.sample_spectrum(mc.GueSampler(12, seed=5))


def test_one_by_one_is_standard_normal(spectra):
    vals = spectra(1, 10_000, 0)[:, 0]
    assert np.var(vals, ddof=1) == pytest.approx(1.0, rel=0.05)


def test_second_moment_and_semicircle(spectra):
    lam = spectra(200, 100, 0)
    assert np.mean(np.sum(lam ** 2, axis=1) / 200) == pytest.approx(1.0, rel=0.03)
    edges = np.linspace(-2.2, 2.2, 23)
    hist, _ = np.histogram(lam.ravel(), bins=edges, density=True)
    mid = 0.5 * (edges[1:] + edges[:-1])
    semi = np.sqrt(np.clip(4 - mid ** 2, 0, None)) / (2 * math.pi)
    assert np.max(np.abs(hist - semi)) < 0.05


def test_constant_statistic_is_deterministic():
    s = mc.linear_statistic_samples(builtin("constant"), 10, 50, seed=3)
    assert s.variance == 0.0
    assert np.all(s.centered_samples == 0.0)
    assert s.ks_distance == 0.0


def test_square_variance(statistic):
    vals = statistic("square", 100, 2000)
    assert np.var(vals, ddof=1) == pytest.approx(2.0, rel=0.10)


@pytest.mark.parametrize("fid", ["identity", "square", "bump"])
def test_mean_matches_exact_expectation(statistic, fid):
    vals = statistic(fid, 100, 2000)
    se = np.std(vals, ddof=1) / math.sqrt(vals.size)
    assert abs(vals.mean() - variance.expectation(builtin(fid), 100)) <= 3 * se


def test_gaussian_self_check():
    x = mc.gaussian_samples(5000, 0.7, seed=9)
    assert mc.ks_distance(x, 0.7) < 0.025


def test_summary_moments():
    x = mc.gaussian_samples(4000, 2.0, seed=1)
    s = mc.summarize(x + 5.0, v_reference=2.0)
    assert s.mean == pytest.approx(5.0, abs=0.1)
    assert s.variance == pytest.approx(np.var(x, ddof=1), rel=1e-12)
    assert abs(s.skewness) < 0.15 and abs(s.excess_kurtosis) < 0.3
    assert 0.0 <= s.ks_distance <= 1.0


def test_clt_diagnostics_guards():
    s = mc.summarize(mc.gaussian_samples(60, 1.0, seed=2))
    with pytest.raises(ValueError):
        mc.clt_diagnostics(s, 0.0)
    with pytest.raises(ValueError):
        mc.clt_diagnostics(mc.summarize(np.arange(10.0)), 1.0)
    d = mc.clt_diagnostics(s, 1.0)
    assert 0 <= d.ks_pvalue <= 1 and d.m == 60


def test_determinism_across_workers():
    f = builtin("bump")
    one = mc.linear_statistic_samples(f, 30, 64, seed=77, workers=1)
    many = mc.linear_statistic_samples(f, 30, 64, seed=77, workers=4)
    assert np.array_equal(one.centered_samples, many.centered_samples)
    assert (one.mean, one.variance, one.ks_distance) == (many.mean, many.variance, many.ks_distance)


def test_bump_variance_approaches_limit(statistic):
    f = builtin("bump")
    v_lim = variance.v_gue(f)[0]
    diffs = [abs(np.var(statistic("bump", n, 2000), ddof=1) - v_lim) for n in (50, 100, 200)]
    inversions = sum(1 for a, b in zip(diffs, diffs[1:]) if b > a)
    assert inversions <= 1
    assert diffs[-1] < 0.1 * v_lim


@pytest.mark.slow
def test_step_variance_grows():
    f = builtin("step")
    m = 400
    vals = []
    for n in (32, 128, 512):
        s = mc.linear_statistic_samples(f, n, m, seed=0)
        exact = variance.exact_variance(f, n)
        assert abs(s.variance - exact) <= 4 * exact * math.sqrt(2 / (m - 1))
        vals.append(s.variance)
    assert vals[0] < vals[1] < vals[2]


def test_cached_statistic_matches_public_api(statistic):
    direct = mc.statistic_values(builtin("bump"), 20, 30, seed=0)
    assert np.array_equal(direct, statistic("bump", 20, 30, 0))

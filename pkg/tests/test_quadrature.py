import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gue_linstat import quadrature as q
from gue_linstat.errors import QuadratureError
from gue_linstat.testfns import builtin


def test_gauss_legendre_basics():
    g = q.gauss_legendre(1, -1, 1)
    assert g.nodes.tolist() == [0.0]
    assert g.weights.tolist() == [2.0]
    assert q.gauss_legendre(3).integrate(lambda x: x ** 4) == pytest.approx(0.4, abs=1e-14)
    assert q.gauss_legendre(20, 0, 1).integrate(np.exp) == pytest.approx(math.e - 1, abs=1e-14)


@settings(max_examples=30, deadline=None)
@given(m=st.integers(1, 200), lo=st.floats(-50, 50), width=st.floats(1e-3, 100))
def test_gauss_legendre_invariants(m, lo, width):
    hi = lo + width
    g = q.gauss_legendre(m, lo, hi)
    assert np.all(np.diff(g.nodes) > 0)
    assert np.all((g.nodes > lo) & (g.nodes < hi))
    assert np.all(g.weights > 0)
    assert math.fsum(g.weights) == pytest.approx(width, rel=1e-12)


def test_gauss_legendre_guards():
    with pytest.raises(ValueError):
        q.gauss_legendre(0)
    with pytest.raises(ValueError):
        q.gauss_legendre(10 ** 6 + 1)
    with pytest.raises(ValueError):
        q.gauss_legendre(4, 1.0, 1.0)


def test_composite_rule_with_breakpoints():
    g = q.composite_gauss_legendre(-2, 2, 5, breakpoints=(0.3,), graded=(0.0,))
    assert 0.3 not in g.nodes
    assert g.integrate(lambda x: np.abs(x) ** 0.75) == pytest.approx(2 * 2 ** 1.75 / 1.75, rel=1e-10)


def test_theta_grid_moments():
    g = q.theta_grid(2000)
    assert math.fsum(g.weights) == pytest.approx(math.pi, abs=1e-14)
    assert g.integrate(lambda x: x * x) == pytest.approx(2 * math.pi, abs=1e-10)
    assert abs(g.integrate(lambda x: x)) < 1e-12
    assert np.all(np.diff(g.nodes) > 0)


def test_shifted_theta_grid_moments():
    g = q.theta_grid_shifted(400)
    assert math.fsum(g.weights) == pytest.approx(math.pi, abs=1e-13)
    assert g.integrate(lambda x: x * x) == pytest.approx(2 * math.pi, rel=1e-5)


@pytest.mark.parametrize("m", [10, 100, 1000])
def test_offset_grids_never_touch(m):
    grid = q.offset_theta_grid2d(m)
    gap = np.min(np.abs(grid.gx.nodes[:, None] - grid.gy.nodes[None, :]))
    assert gap > 0
    # nearest pair sits at the ends, where the spacing in x is ~ 1/m^2
    assert gap > 1e-2 / m ** 2


def test_offset_gap_shrinks_with_m():
    gaps = []
    for m in (50, 100, 200):
        grid = q.offset_theta_grid2d(m)
        gaps.append(np.min(np.abs(grid.gx.nodes[:, None] - grid.gy.nodes[None, :])))
    assert gaps[0] > gaps[1] > gaps[2]


def test_integrate_2d_constant_and_quotient():
    grid = q.offset_theta_grid2d(300)
    assert q.integrate_2d(grid, lambda x, y: np.ones_like(x)) == pytest.approx(math.pi ** 2, abs=1e-12)
    quotient = q.integrate_2d(grid, lambda x, y: ((x - y) / (x - y)) ** 2)
    assert quotient == pytest.approx(math.pi ** 2, abs=1e-12)


def test_integrate_2d_square_moment():
    grid = q.offset_theta_grid2d(2000)
    val = q.integrate_2d(grid, lambda x, y: (x + y) ** 2 * (4 - x * y))
    assert val == pytest.approx(8 * math.pi ** 2, abs=1e-6)


def test_quotient_integral_agrees_with_integrate_2d():
    grid = q.offset_theta_grid2d(200)
    f = np.tanh
    direct = q.integrate_2d(grid, lambda x, y: ((f(x) - f(y)) / (x - y)) ** 2)
    fast = q.quotient_integral(grid, f(grid.gx.nodes), f(grid.gy.nodes))
    assert fast == pytest.approx(direct, rel=1e-13)


def test_integrate_2d_names_bad_pair():
    grid = q.Grid2D(q.theta_grid(4), q.theta_grid(4))
    with pytest.raises(QuadratureError, match=r"\(x, y\)"):
        q.integrate_2d(grid, lambda x, y: 1.0 / (x - y))


def test_excise_band():
    g = q.theta_grid(100)
    grid = q.Grid2D(g, g, q.DiagonalPolicy.EXCISE_BAND, band=1e-9)
    val = q.integrate_2d(grid, lambda x, y: ((np.sin(x) - np.sin(y)) / (x - y)) ** 2)
    assert math.isfinite(val) and val > 0


def test_refinement_error_is_honest():
    # doubling m moves a smooth result by less than the reported estimate
    def compute(m):
        return q.integrate_2d(q.offset_theta_grid2d(m), lambda x, y: np.exp(0.3 * (x - y)) * (4 - x * y))

    v1, e1 = q.with_refinement(compute, 64)
    v2, _ = q.with_refinement(compute, 128)
    assert abs(v2 - v1) <= e1


def test_cheb_coeffs_known():
    c = q.cheb_coeffs(lambda x: x, 8).coeffs
    assert c[1] == pytest.approx(2.0, abs=1e-12)
    assert np.max(np.abs(np.delete(c, 1))) < 1e-10
    c = q.cheb_coeffs(lambda x: x * x, 8).coeffs
    assert c[0] == pytest.approx(2.0) and c[2] == pytest.approx(2.0)
    assert np.max(np.abs(np.delete(c, [0, 2]))) < 1e-10
    c = q.cheb_coeffs(lambda x: np.ones_like(x), 8).coeffs
    assert c[0] == pytest.approx(1.0, abs=1e-15)
    assert np.max(np.abs(c[1:])) < 1e-12


def test_cheb_coeffs_guard():
    with pytest.raises(ValueError):
        q.cheb_coeffs(np.sin, 10, m=39)


def test_cheb_series_round_trip():
    rng = np.random.default_rng(7)
    poly = np.polynomial.Polynomial(rng.normal(size=7))
    series = q.cheb_coeffs(poly, 12)
    pts = rng.uniform(-2, 2, 20)
    assert np.allclose(series(pts), poly(pts), atol=1e-9)
    assert series(2.0) == pytest.approx(math.fsum(series.coeffs), abs=1e-12)


def test_cheb_of_catalog_function():
    c = q.cheb_coeffs(builtin("cheb_5"), 16).coeffs
    assert c[5] == pytest.approx(1.0, abs=1e-12)
